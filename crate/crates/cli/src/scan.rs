use std::fmt::Write;

use oscdeform_core::moments::{preset_moments, squeezing_window_scan, LambdaGrid};
use oscdeform_core::{MomentReport, PresetKind, QuadratureRule, SqueezingWindow};
use rayon::prelude::*;
use serde::Serialize;

pub const CSV_HEADER: &str = "preset,lambda,n,mean_x,var_x,var_p,product,squeezed_x,squeezed_p";

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub preset: PresetKind,
    pub lambda: f64,
    pub n: usize,
    pub mean_x: f64,
    pub var_x: f64,
    pub var_p: f64,
    pub product: f64,
    pub squeezed_x: bool,
    pub squeezed_p: bool,
}

impl Row {
    fn new(preset: PresetKind, lambda: f64, n: usize, m: MomentReport) -> Self {
        Self {
            preset,
            lambda,
            n,
            mean_x: m.mean_x,
            var_x: m.var_x,
            var_p: m.var_p,
            product: m.product,
            squeezed_x: m.squeezed_x,
            squeezed_p: m.squeezed_p,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanTable {
    pub preset: PresetKind,
    pub grid: LambdaGrid,
    pub n_max: usize,
    pub rows: Vec<Row>,
    /// x-squeezing windows over the grid, one per level.
    pub windows: Vec<SqueezingWindow>,
}

/// Rows in n-major, lambda-minor order. Evaluated in parallel; `collect`
/// keeps the index order, so the output does not depend on scheduling.
pub fn rows(
    kind: PresetKind,
    grid: &LambdaGrid,
    n_max: usize,
    rule: &QuadratureRule,
) -> oscdeform_core::Result<Vec<Row>> {
    let lambdas = grid.points();
    let cells: Vec<(usize, f64)> = (0..=n_max)
        .flat_map(|n| lambdas.iter().map(move |&l| (n, l)))
        .collect();
    cells
        .par_iter()
        .map(|&(n, lambda)| {
            Ok(Row::new(
                kind,
                lambda,
                n,
                preset_moments(kind, n, lambda, rule)?,
            ))
        })
        .collect()
}

pub fn table(
    kind: PresetKind,
    grid: &LambdaGrid,
    n_max: usize,
    rule: &QuadratureRule,
) -> oscdeform_core::Result<ScanTable> {
    let rows = rows(kind, grid, n_max, rule)?;
    let windows = (0..=n_max)
        .map(|n| squeezing_window_scan(kind, n, grid, rule))
        .collect::<oscdeform_core::Result<_>>()?;
    Ok(ScanTable {
        preset: kind,
        grid: *grid,
        n_max,
        rows,
        windows,
    })
}

pub fn to_csv(rows: &[Row]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        writeln!(
            out,
            "{},{:.16e},{},{:.16e},{:.16e},{:.16e},{:.16e},{},{}",
            r.preset,
            r.lambda,
            r.n,
            r.mean_x,
            r.var_x,
            r.var_p,
            r.product,
            r.squeezed_x,
            r.squeezed_p
        )
        .expect("writing to a String");
    }
    out
}
