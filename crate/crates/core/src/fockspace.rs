//! Truncated Fock-space matrices for `a`, `b`, `b^dagger` and
//! `H = {b, b^dagger}/2`.
//!
//! This backend never touches the differential-equation solution; it checks
//! the operator algebra directly. Truncating to `dim` basis states corrupts
//! only the last rows and columns of products of ladder operators, so every
//! identity is measured on the leading `dim - INTERIOR_MARGIN` block.

use faer::linalg::solvers::Eigen;
use faer::{Mat, MatRef};

use crate::deformation::{constraint_residual, CParams};
use crate::error::{Error, Result};

/// Rows and columns dropped from the end before comparing. Two is the
/// largest ladder step appearing in `H` (through `a^2` and `a^dagger^2`).
pub const INTERIOR_MARGIN: usize = 2;
pub const MIN_DIM: usize = 4;
/// Eigenvalues with larger imaginary part count as a reality violation.
pub const IMAG_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct TruncatedOperators {
    dim: usize,
    c: [f64; 6],
    a: Mat<f64>,
    b: Mat<f64>,
    bdag: Mat<f64>,
    h: Mat<f64>,
}

/// Builds the truncated matrices for constraint-satisfying parameters.
pub fn build(c: &CParams, dim: usize) -> Result<TruncatedOperators> {
    build_raw(c.to_array(), dim)
}

/// Like [`build`] but skips the constraint check, for studying how a
/// violated constraint shows up in the commutator.
pub fn build_raw(c: [f64; 6], dim: usize) -> Result<TruncatedOperators> {
    if dim < MIN_DIM {
        return Err(Error::DimensionTooSmall { dim, min: MIN_DIM });
    }
    let [c1, c2, c3, c4, c5, c6] = c;
    let a = Mat::from_fn(
        dim,
        dim,
        |i, j| if j == i + 1 { (j as f64).sqrt() } else { 0.0 },
    );
    let at = a.transpose();
    let id = Mat::<f64>::identity(dim, dim);
    let b = (1.0 + c1) * &a + c2 * at + c3 * &id;
    let bdag = c4 * &a + (1.0 + c5) * at + c6 * &id;
    let h = 0.5 * (&b * &bdag + &bdag * &b);
    Ok(TruncatedOperators {
        dim,
        c,
        a,
        b,
        bdag,
        h,
    })
}

fn commutator(x: MatRef<'_, f64>, y: MatRef<'_, f64>) -> Mat<f64> {
    x * y - y * x
}

/// Max-norm over the leading `size x size` block.
fn block_max_abs(m: MatRef<'_, f64>, size: usize) -> f64 {
    let mut max = 0.0f64;
    for j in 0..size {
        for i in 0..size {
            max = max.max(m[(i, j)].abs());
        }
    }
    max
}

impl TruncatedOperators {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn params(&self) -> [f64; 6] {
        self.c
    }

    pub fn a(&self) -> MatRef<'_, f64> {
        self.a.as_ref()
    }

    pub fn b(&self) -> MatRef<'_, f64> {
        self.b.as_ref()
    }

    pub fn bdag(&self) -> MatRef<'_, f64> {
        self.bdag.as_ref()
    }

    pub fn h(&self) -> MatRef<'_, f64> {
        self.h.as_ref()
    }

    fn interior(&self) -> usize {
        self.dim - INTERIOR_MARGIN
    }

    /// `max |[b, b^dagger] - I|` on the interior block.
    pub fn commutator_residual(&self) -> f64 {
        let mut m = commutator(self.b.as_ref(), self.bdag.as_ref());
        for i in 0..self.dim {
            m[(i, i)] -= 1.0;
        }
        block_max_abs(m.as_ref(), self.interior())
    }

    /// Interior max-norms of `[H, b] + b` and `[H, b^dagger] - b^dagger`.
    pub fn wigner_residuals(&self) -> (f64, f64) {
        let lower = commutator(self.h.as_ref(), self.b.as_ref()) + &self.b;
        let raise = commutator(self.h.as_ref(), self.bdag.as_ref()) - &self.bdag;
        (
            block_max_abs(lower.as_ref(), self.interior()),
            block_max_abs(raise.as_ref(), self.interior()),
        )
    }

    /// Whether `h` is symmetric, relative to its largest entry.
    pub fn is_symmetric(&self, rel_tol: f64) -> bool {
        let scale = block_max_abs(self.h.as_ref(), self.dim).max(1.0);
        (0..self.dim)
            .all(|j| (0..j).all(|i| (self.h[(i, j)] - self.h[(j, i)]).abs() <= rel_tol * scale))
    }

    /// Eigenpairs of `h` sorted by real part, the lowest `levels` of them,
    /// each eigenvalue checked for reality.
    fn lowest_eigenpairs(&self, levels: usize) -> Result<Vec<(f64, Vec<f64>)>> {
        if levels > self.dim / 2 {
            return Err(Error::TooManyLevels {
                requested: levels,
                max: self.dim / 2,
            });
        }
        let evd = Eigen::new_from_real(self.h.as_ref())
            .map_err(|e| Error::EigenSolver(format!("{e:?}")))?;
        let values = evd.S().column_vector();
        let vectors = evd.U();
        let mut order: Vec<usize> = (0..self.dim).collect();
        order.sort_by(|&i, &j| values[i].re.total_cmp(&values[j].re));
        order
            .into_iter()
            .take(levels)
            .enumerate()
            .map(|(index, k)| {
                let value = values[k];
                if value.im.abs() > IMAG_TOL {
                    return Err(Error::SpectrumNotReal {
                        index,
                        imag: value.im,
                    });
                }
                // fix the complex phase by the largest component so the
                // vector of a real eigenvalue becomes real
                let col = vectors.col(k);
                let pivot = (0..self.dim)
                    .max_by(|&i, &j| col[i].norm().total_cmp(&col[j].norm()))
                    .expect("non-empty");
                let phase = col[pivot] / col[pivot].norm();
                let vector = (0..self.dim).map(|i| (col[i] / phase).re).collect();
                Ok((value.re, vector))
            })
            .collect()
    }

    /// The `k` eigenvalues of lowest real part, sorted ascending. Complex
    /// eigenvalues are reported as an error rather than dropped.
    pub fn spectrum_check(&self, k: usize) -> Result<Vec<f64>> {
        Ok(self
            .lowest_eigenpairs(k)?
            .into_iter()
            .map(|(v, _)| v)
            .collect())
    }

    /// Residuals of `b b^dagger |n> = (n+1)|n>` and `b^dagger b |n> = n|n>`
    /// over the lowest `levels` right eigenvectors `|n>` of `h`.
    ///
    /// Each residual is `max |(M - target) v|` over the interior rows,
    /// relative to `max |v|`, maximized over levels.
    pub fn number_identities(&self, levels: usize) -> Result<(f64, f64)> {
        let bbd = &self.b * &self.bdag;
        let bdb = &self.bdag * &self.b;
        let rows = self.interior();
        let mut worst = (0.0f64, 0.0f64);
        for (n, (_, v)) in self.lowest_eigenpairs(levels)?.into_iter().enumerate() {
            let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let residual = |m: &Mat<f64>, target: f64| {
                (0..rows)
                    .map(|i| {
                        let mv: f64 = (0..self.dim).map(|j| m[(i, j)] * v[j]).sum();
                        (mv - target * v[i]).abs()
                    })
                    .fold(0.0f64, f64::max)
                    / scale
            };
            worst.0 = worst.0.max(residual(&bbd, n as f64 + 1.0));
            worst.1 = worst.1.max(residual(&bdb, n as f64));
        }
        Ok(worst)
    }

    /// Constraint residual of the parameters the matrices were built from.
    pub fn constraint_residual(&self) -> f64 {
        constraint_residual(&self.c)
    }
}
