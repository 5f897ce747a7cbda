//! Six-parameter deformations of the bosonic ladder operators.
//!
//! `b = (1+c1) a + c2 a^dagger + c3` and `b^dagger = c4 a + (1+c5) a^dagger + c6`
//! keep `[b, b^dagger] = 1` under a single quadratic constraint on the `c`s.
//! The Hamiltonian `H = {b, b^dagger}/2` is then a second-order differential
//! operator, generally not selfadjoint, whose spectrum is nevertheless
//! `n + 1/2`.
//!
//! Modules:
//!
//! - [`specialfn`]: Hermite and Laguerre polynomials, Gauss-Hermite rules.
//! - [`deformation`]: parameter algebra, Hamiltonian coefficients, presets.
//! - [`eigensystem`]: change of variable, energies, normalized eigenfunctions.
//! - [`moments`]: variances, uncertainty products, squeezing windows.
//! - [`fockspace`]: truncated matrix representation, an independent check
//!   of the operator algebra and the spectrum.
//! - [`discrepancy`]: closed forms compared against the oracles.

pub mod deformation;
pub mod discrepancy;
pub mod eigensystem;
pub mod error;
pub mod fockspace;
pub mod moments;
pub mod specialfn;

pub use deformation::{
    coeffs_from_c, preset, preset_params, CParams, HamCoeffs, PresetId, PresetKind,
};
pub use eigensystem::{EigenState, GroundStateForm};
pub use error::{Error, Result};
pub use fockspace::TruncatedOperators;
pub use moments::{MomentReport, SqueezingWindow};
pub use specialfn::{gauss_hermite, QuadratureRule, DEFAULT_QUAD_ORDER};
