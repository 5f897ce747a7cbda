use std::fmt;

use oscdeform_core::deformation::{constraint_residual, CONSTRAINT_TOL};
use oscdeform_core::eigensystem::{closed_form_norm, energy_general, gram_matrix};
use oscdeform_core::moments::{ground_moments_closed, state_moments};
use oscdeform_core::{fockspace, CParams, EigenState, HamCoeffs, PresetId, QuadratureRule};
use serde::Serialize;

pub const ENERGY_TOL: f64 = 1e-10;
pub const RESIDUAL_TOL: f64 = 1e-7;
pub const NORM_TOL: f64 = 1e-9;
pub const PRODUCT_TOL: f64 = 1e-9;
pub const COMMUTATOR_TOL: f64 = 1e-10;
pub const GRAM_TOL: f64 = 1e-8;
const GRID_POINTS: usize = 241;
const GRID_SIGMAS: f64 = 6.0;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub label: String,
    pub value: f64,
    pub tol: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Suite {
    pub name: &'static str,
    /// The relation the suite tests, named for failure listings.
    pub relation: &'static str,
    pub passed: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub source: String,
    pub n_max: usize,
    pub quad_order: usize,
    pub dim: usize,
    pub passed: usize,
    pub total: usize,
    pub suites: Vec<Suite>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.passed == self.total
    }
}

struct SuiteBuilder {
    checks: Vec<Check>,
}

impl SuiteBuilder {
    fn new() -> Self {
        Self { checks: Vec::new() }
    }

    /// Records `value <= tol`; NaN fails.
    fn le(&mut self, label: impl Into<String>, value: f64, tol: f64) {
        self.checks.push(Check {
            label: label.into(),
            value,
            tol,
            passed: value <= tol,
        });
    }
}

fn finish(
    name: &'static str,
    relation: &'static str,
    body: impl FnOnce(&mut SuiteBuilder) -> oscdeform_core::Result<()>,
) -> Suite {
    let mut b = SuiteBuilder::new();
    let error = body(&mut b).err().map(|e| e.to_string());
    let passed = error.is_none() && b.checks.iter().all(|c| c.passed);
    Suite {
        name,
        relation,
        passed,
        checks: b.checks,
        error,
    }
}

pub struct VerifyInput<'a> {
    pub label: String,
    pub params: CParams,
    pub preset: Option<PresetId>,
    pub n_max: usize,
    pub dim: usize,
    pub rule: &'a QuadratureRule,
}

pub fn run(input: &VerifyInput<'_>) -> VerifyReport {
    let c = input.params;
    let h = c.coeffs();
    let levels = 0..=input.n_max;
    let rule = input.rule;

    let suites = vec![
        finish("constraint", "c1 + c5 + c1 c5 - c2 c4 = 0", |b| {
            b.le(
                "residual",
                constraint_residual(&c.to_array()).abs(),
                CONSTRAINT_TOL,
            );
            Ok(())
        }),
        finish("spectrum", "H psi_n = (n + 1/2) psi_n", |b| {
            let cov = oscdeform_core::eigensystem::change_of_variable(&h)?;
            for n in levels.clone() {
                let e = energy_general(&h, &cov, n);
                b.le(
                    format!("n={n} energy"),
                    (e - (n as f64 + 0.5)).abs(),
                    ENERGY_TOL,
                );
                let state = EigenState::new(&h, n, rule)?;
                b.le(
                    format!("n={n} residual"),
                    max_residual(&state),
                    RESIDUAL_TOL,
                );
            }
            Ok(())
        }),
        finish("normalization", "integral psi_n^2 dx = 1", |b| {
            for n in levels.clone() {
                let state = EigenState::new(&h, n, rule)?;
                let unit = state.expectation(rule, |_| 1.0);
                b.le(format!("n={n} unit norm"), (unit - 1.0).abs(), NORM_TOL);
                if let Some(closed) = input.preset.and_then(|id| closed_form_norm(id, n)) {
                    let rel = (closed - state.norm()).abs() / state.norm();
                    b.le(format!("n={n} closed form"), rel, NORM_TOL);
                }
            }
            Ok(())
        }),
        finish("heisenberg", "dx dp >= 1/2, equality at n = 0", |b| {
            for n in levels.clone() {
                let m = state_moments(&EigenState::new(&h, n, rule)?, rule);
                if n == 0 {
                    b.le("n=0 product - 1/2", (m.product - 0.5).abs(), PRODUCT_TOL);
                    ground_against_closed(b, &h, &m)?;
                } else {
                    b.le(format!("n={n} 1/2 - product"), 0.5 - m.product, PRODUCT_TOL);
                }
            }
            Ok(())
        }),
        finish(
            "commutator",
            "[b, b+] = 1, [H, b] = -b, [H, b+] = b+",
            |b| {
                let ops = fockspace::build(&c, input.dim)?;
                b.le("[b,b+] - 1", ops.commutator_residual(), COMMUTATOR_TOL);
                let (lower, raise) = ops.wigner_residuals();
                b.le("[H,b] + b", lower, COMMUTATOR_TOL);
                b.le("[H,b+] - b+", raise, COMMUTATOR_TOL);
                Ok(())
            },
        ),
        finish(
            "gram",
            "G = I when H is selfadjoint, unit diagonal otherwise",
            |b| {
                let g = gram_matrix(&h, input.n_max, rule)?;
                let selfadjoint = h.is_selfadjoint();
                for (m, row) in g.iter().enumerate() {
                    for (n, &v) in row.iter().enumerate() {
                        if m == n {
                            b.le(format!("G[{m}][{m}] - 1"), (v - 1.0).abs(), GRAM_TOL);
                        } else if selfadjoint && m < n {
                            b.le(format!("G[{m}][{n}]"), v.abs(), GRAM_TOL);
                        }
                    }
                }
                Ok(())
            },
        ),
    ];

    let passed = suites.iter().filter(|s| s.passed).count();
    VerifyReport {
        source: input.label.clone(),
        n_max: input.n_max,
        quad_order: rule.order(),
        dim: input.dim,
        passed,
        total: suites.len(),
        suites,
    }
}

fn ground_against_closed(
    b: &mut SuiteBuilder,
    h: &HamCoeffs,
    m: &oscdeform_core::MomentReport,
) -> oscdeform_core::Result<()> {
    let closed = ground_moments_closed(h)?;
    let scale = 1.0 + closed.mean_x.abs();
    b.le(
        "n=0 mean_x vs closed form",
        (m.mean_x - closed.mean_x).abs() / scale,
        NORM_TOL,
    );
    b.le(
        "n=0 var_x vs closed form",
        (m.var_x - closed.var_x).abs() / closed.var_x,
        NORM_TOL,
    );
    b.le(
        "n=0 var_p vs closed form",
        (m.var_p - closed.var_p).abs() / closed.var_p,
        NORM_TOL,
    );
    Ok(())
}

/// Worst pointwise relative residual over `centre +- 6 sigma`.
pub fn max_residual(state: &EigenState) -> f64 {
    let (centre, width) = (state.envelope_center(), state.envelope_width());
    let half = GRID_SIGMAS * width * (1.0 + state.n() as f64).sqrt();
    (0..GRID_POINTS)
        .map(|i| centre - half + 2.0 * half * i as f64 / (GRID_POINTS - 1) as f64)
        .map(|x| state.equation_residual(x))
        .fold(0.0, f64::max)
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verify {}", self.source)?;
        writeln!(
            f,
            "  levels 0..={}, quadrature order {}, dim {}",
            self.n_max, self.quad_order, self.dim
        )?;
        for s in &self.suites {
            let worst = s
                .checks
                .iter()
                .max_by(|a, b| (a.value / a.tol).total_cmp(&(b.value / b.tol)));
            let status = if s.passed { "PASS" } else { "FAIL" };
            match worst {
                Some(c) => writeln!(
                    f,
                    "  {status} {:<14} worst {:.3e} ({}, tol {:.0e})",
                    s.name, c.value, c.label, c.tol
                )?,
                None => writeln!(f, "  {status} {}", s.name)?,
            }
            if let Some(e) = &s.error {
                writeln!(f, "       error: {e}")?;
            }
            if !s.passed {
                writeln!(f, "       violated: {}", s.relation)?;
                for c in s.checks.iter().filter(|c| !c.passed) {
                    writeln!(f, "       {}: {:.6e} > {:.0e}", c.label, c.value, c.tol)?;
                }
            }
        }
        write!(f, "{}/{} suites pass", self.passed, self.total)
    }
}
