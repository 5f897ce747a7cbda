//! Deformation parameters of the generalized ladder operators
//!
//! ```text
//! b      = (1 + c1) a + c2 a^dagger + c3
//! b^dagg = c4 a + (1 + c5) a^dagger + c6
//! ```
//!
//! and the second-order differential Hamiltonian `H = {b, b^dagger} / 2`
//! they induce.

use std::f64::consts::SQRT_2;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on the commutator constraint and on the exact-zero tests of
/// the symmetry predicates.
pub const CONSTRAINT_TOL: f64 = 1e-12;

/// `c1 + c5 + c1 c5 - c2 c4`; zero exactly when `[b, b^dagger] = 1`.
pub fn constraint_residual(c: &[f64; 6]) -> f64 {
    let [c1, c2, _, c4, c5, _] = *c;
    c1 + c5 + c1 * c5 - c2 * c4
}

/// A constraint-satisfying set of deformation parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CParams {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
    pub c6: f64,
}

impl CParams {
    pub const HARMONIC: CParams = CParams {
        c1: 0.0,
        c2: 0.0,
        c3: 0.0,
        c4: 0.0,
        c5: 0.0,
        c6: 0.0,
    };

    /// Validates the commutator constraint to [`CONSTRAINT_TOL`].
    pub fn new(c: [f64; 6]) -> Result<Self> {
        let residual = constraint_residual(&c);
        if residual.is_nan() || residual.abs() > CONSTRAINT_TOL {
            return Err(Error::ConstraintViolated { residual });
        }
        Ok(Self::from_array(c))
    }

    fn from_array(c: [f64; 6]) -> Self {
        let [c1, c2, c3, c4, c5, c6] = c;
        Self {
            c1,
            c2,
            c3,
            c4,
            c5,
            c6,
        }
    }

    pub fn to_array(&self) -> [f64; 6] {
        [self.c1, self.c2, self.c3, self.c4, self.c5, self.c6]
    }

    pub fn residual(&self) -> f64 {
        constraint_residual(&self.to_array())
    }

    /// Solves the constraint for `c5` given the other five parameters.
    /// Fails when `c1 = -1`, where `c5` is undetermined.
    pub fn solve_c5(c1: f64, c2: f64, c3: f64, c4: f64, c6: f64) -> Result<Self> {
        if 1.0 + c1 == 0.0 {
            return Err(Error::ConstraintViolated { residual: f64::NAN });
        }
        let c5 = (c2 * c4 - c1) / (1.0 + c1);
        Self::new([c1, c2, c3, c4, c5, c6])
    }

    /// Random constraint-satisfying parameters: `c1, c2, c3, c4, c6`
    /// uniform in `[-span, span]`, `c5` solved from the constraint.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R, span: f64) -> Self {
        loop {
            let mut draw = || rng.random_range(-span..=span);
            let (c1, c2, c3, c4, c6) = (draw(), draw(), draw(), draw(), draw());
            if let Ok(c) = Self::solve_c5(c1, c2, c3, c4, c6) {
                return c;
            }
        }
    }

    /// Random parameters drawn from the mutually adjoint sub-family
    /// `c1 = c5, c2 = c4, c3 = c6`.
    ///
    /// The constraint reduces to `(1 + c1)^2 - c2^2 = 1`, parametrized as
    /// `1 + c1 = cosh(r)`, `c2 = sinh(r)`.
    pub fn sample_mutually_adjoint<R: Rng + ?Sized>(
        rng: &mut R,
        max_squeeze: f64,
        span: f64,
    ) -> Self {
        let r: f64 = rng.random_range(-max_squeeze..=max_squeeze);
        let shift: f64 = rng.random_range(-span..=span);
        let c1 = r.cosh() - 1.0;
        let c2 = r.sinh();
        Self::from_array([c1, c2, shift, c2, c1, shift])
    }

    pub fn is_mutually_adjoint(&self) -> bool {
        is_mutually_adjoint(self)
    }

    pub fn coeffs(&self) -> HamCoeffs {
        coeffs_from_c(self)
    }
}

/// Coefficients of `H = a d^2/dx^2 + (b x + c) d/dx + d x^2 + e x + f`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HamCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

impl HamCoeffs {
    pub fn is_admissible(&self) -> bool {
        is_admissible(self)
    }

    pub fn is_selfadjoint(&self) -> bool {
        is_selfadjoint(self)
    }

    /// `Ok(())` for admissible coefficients, otherwise the first violated
    /// inequality.
    pub fn check_admissible(&self) -> Result<()> {
        if self.a.is_nan() || self.a >= 0.0 {
            return Err(Error::NotAdmissible {
                condition: "A<0",
                detail: format!("A = {}", self.a),
            });
        }
        if self.b.is_nan() || self.b >= 1.0 {
            return Err(Error::NotAdmissible {
                condition: "B<1",
                detail: format!("B = {}", self.b),
            });
        }
        Ok(())
    }
}

/// The Hamiltonian coefficients induced by `c`.
///
/// `A` and `D` are the forms reduced with the constraint; without it they
/// would each pick up `-/+ residual / 2`.
pub fn coeffs_from_c(c: &CParams) -> HamCoeffs {
    let CParams {
        c1,
        c2,
        c3,
        c4,
        c5,
        c6,
    } = *c;
    HamCoeffs {
        a: -0.5 - c2 * c4 + 0.5 * c4 * (1.0 + c1) + 0.5 * c2 * (1.0 + c5),
        b: c4 * (1.0 + c1) - c2 * (1.0 + c5),
        c: (c6 * (c1 - c2 + 1.0) + c3 * (c4 - c5 - 1.0)) / SQRT_2,
        d: 0.5 + c2 * c4 + 0.5 * c4 * (1.0 + c1) + 0.5 * c2 * (1.0 + c5),
        e: (c6 * (c1 + c2 + 1.0) + c3 * (c4 + c5 + 1.0)) / SQRT_2,
        f: 0.5 * c4 * (1.0 + c1) - 0.5 * c2 * (1.0 + c5) + c3 * c6,
    }
}

/// Square-integrable eigenfunctions exist iff `A < 0` and `B < 1`.
pub fn is_admissible(h: &HamCoeffs) -> bool {
    h.a < 0.0 && h.b < 1.0
}

/// `H` is formally selfadjoint iff the first-derivative term vanishes.
pub fn is_selfadjoint(h: &HamCoeffs) -> bool {
    h.b.abs() <= CONSTRAINT_TOL && h.c.abs() <= CONSTRAINT_TOL
}

/// `b^dagger` is the adjoint of `b`: `c1 = c5`, `c2 = c4`, `c3 = c6`.
pub fn is_mutually_adjoint(c: &CParams) -> bool {
    (c.c1 - c.c5).abs() <= CONSTRAINT_TOL
        && (c.c2 - c.c4).abs() <= CONSTRAINT_TOL
        && (c.c3 - c.c6).abs() <= CONSTRAINT_TOL
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PresetKind {
    /// All parameters zero: `b = a`.
    Harmonic,
    /// `b^dagger = a^dagger + lambda`; non-selfadjoint `H = H_osc + lambda a`.
    LambdaShift,
    /// Selfadjoint Bogoliubov pair with fixed squeeze and a `lambda` shift.
    #[serde(rename = "case_i")]
    CaseI,
    /// Selfadjoint Bogoliubov pair with squeeze `lambda > 0`.
    #[serde(rename = "case_ii")]
    CaseII,
    /// `b = a + lambda a^dagger`, `b^dagger = a^dagger`, `|lambda| < 1`.
    #[serde(rename = "case_iii")]
    CaseIII,
}

impl PresetKind {
    pub const ALL: [PresetKind; 5] = [
        PresetKind::Harmonic,
        PresetKind::LambdaShift,
        PresetKind::CaseI,
        PresetKind::CaseII,
        PresetKind::CaseIII,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PresetKind::Harmonic => "harmonic",
            PresetKind::LambdaShift => "lambda_shift",
            PresetKind::CaseI => "case_i",
            PresetKind::CaseII => "case_ii",
            PresetKind::CaseIII => "case_iii",
        }
    }

    /// Checks `lambda` against the preset's validity range.
    pub fn check_lambda(self, lambda: f64) -> Result<()> {
        let bound = match self {
            _ if !lambda.is_finite() => Some("a finite value"),
            PresetKind::CaseII if lambda <= 0.0 => Some("lambda > 0"),
            PresetKind::CaseIII if !(lambda > -1.0 && lambda < 1.0) => Some("-1 < lambda < 1"),
            _ => None,
        };
        match bound {
            Some(bound) => Err(Error::LambdaOutOfRange {
                preset: self.name(),
                lambda,
                bound,
            }),
            None => Ok(()),
        }
    }

    /// Whether `lambda` lies in the validity range.
    pub fn accepts(self, lambda: f64) -> bool {
        self.check_lambda(lambda).is_ok()
    }
}

impl fmt::Display for PresetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PresetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PresetKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownPreset(s.to_owned()))
    }
}

/// A named preset together with its deformation parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PresetId {
    pub kind: PresetKind,
    pub lambda: f64,
}

impl PresetId {
    pub fn new(kind: PresetKind, lambda: f64) -> Result<Self> {
        kind.check_lambda(lambda)?;
        Ok(Self { kind, lambda })
    }

    pub fn harmonic() -> Self {
        Self {
            kind: PresetKind::Harmonic,
            lambda: 0.0,
        }
    }

    pub fn params(&self) -> Result<CParams> {
        preset(*self)
    }
}

impl fmt::Display for PresetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            PresetKind::Harmonic => f.write_str("harmonic"),
            kind => write!(f, "{kind}(lambda={})", self.lambda),
        }
    }
}

/// The deformation parameters of a named preset.
pub fn preset(id: PresetId) -> Result<CParams> {
    id.kind.check_lambda(id.lambda)?;
    preset_params(id.kind, id.lambda)
}

/// The preset's parameters without the `lambda` range check. Only the
/// constraint is enforced, so the result may be inadmissible; callers that
/// want to report which inequality fails start here.
pub fn preset_params(kind: PresetKind, lambda: f64) -> Result<CParams> {
    let c = match kind {
        PresetKind::Harmonic => [0.0; 6],
        PresetKind::LambdaShift => [0.0, 0.0, 0.0, 0.0, 0.0, lambda],
        PresetKind::CaseI => {
            let (diag, off) = (2.0 / 3.0, 4.0 / 3.0);
            [diag, off, lambda, off, diag, lambda]
        }
        PresetKind::CaseII => {
            let root = lambda.sqrt();
            let diag = (root - 1.0).powi(2) / (2.0 * root);
            let off = (lambda - 1.0) / (2.0 * root);
            [diag, off, 0.0, off, diag, 0.0]
        }
        PresetKind::CaseIII => [0.0, lambda, 0.0, 0.0, 0.0, 0.0],
    };
    CParams::new(c)
}
