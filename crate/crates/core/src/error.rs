use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("quadrature order must be at least 1")]
    ZeroQuadratureOrder,

    #[error("Gauss-Hermite Newton iteration did not converge for order {order}")]
    QuadratureNoConvergence { order: usize },

    #[error("constraint c1 + c5 + c1*c5 - c2*c4 = 0 violated (residual {residual:e})")]
    ConstraintViolated { residual: f64 },

    #[error("{preset}: lambda = {lambda} outside validity range, requires {bound}")]
    LambdaOutOfRange {
        preset: &'static str,
        lambda: f64,
        bound: &'static str,
    },

    #[error("unknown preset {0:?} (expected harmonic, lambda_shift, case_i, case_ii or case_iii)")]
    UnknownPreset(String),

    #[error("admissibility {condition} violated ({detail})")]
    NotAdmissible {
        condition: &'static str,
        detail: String,
    },

    #[error("norm integral of state n = {n} is not finite")]
    NormNotFinite { n: usize },

    #[error("truncation dimension {dim} below minimum {min}")]
    DimensionTooSmall { dim: usize, min: usize },

    #[error("requested {requested} levels but at most {max} are available")]
    TooManyLevels { requested: usize, max: usize },

    #[error("eigen-solver failed: {0}")]
    EigenSolver(String),

    #[error("eigenvalue {index} is not real (imaginary part {imag:e})")]
    SpectrumNotReal { index: usize, imag: f64 },

    #[error("invalid lambda grid: {0}")]
    InvalidGrid(String),
}
