//! Position and momentum moments, uncertainty products and squeezing.
//!
//! Units are `hbar = m = omega = 1`, so the vacuum variances are `1/2` and
//! coherence means `dx * dp = 1/2`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::deformation::{preset, HamCoeffs, PresetId, PresetKind};
use crate::eigensystem::EigenState;
use crate::error::{Error, Result};
use crate::specialfn::{hermite, hermite_pair, laguerre, QuadratureRule};

/// Dead-band below the vacuum variance; `var == 1/2` is not squeezed.
pub const SQUEEZE_TOL: f64 = 1e-12;
/// Tolerance on `dx * dp = 1/2` for the coherence flag.
pub const COHERENCE_TOL: f64 = 1e-9;
/// Default bisection resolution for window boundaries.
pub const WINDOW_RESOLUTION: f64 = 1e-6;

const VACUUM: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub mean_x: f64,
    pub mean_x2: f64,
    pub mean_p: f64,
    pub mean_p2: f64,
    pub var_x: f64,
    pub var_p: f64,
    /// `dx * dp`
    pub product: f64,
    pub squeezed_x: bool,
    pub squeezed_p: bool,
    pub coherent: bool,
}

impl MomentReport {
    fn from_moments(mean_x: f64, var_x: f64, mean_p2: f64) -> Self {
        let var_p = mean_p2;
        let product = (var_x * var_p).sqrt();
        Self {
            mean_x,
            mean_x2: var_x + mean_x * mean_x,
            mean_p: 0.0,
            mean_p2,
            var_x,
            var_p,
            product,
            squeezed_x: is_squeezed(var_x),
            squeezed_p: is_squeezed(var_p),
            coherent: (product - VACUUM).abs() <= COHERENCE_TOL,
        }
    }
}

/// `var < 1/2` outside the dead-band.
pub fn is_squeezed(var: f64) -> bool {
    var < VACUUM - SQUEEZE_TOL
}

/// Moments of the normalized eigenstate `psi_n` by quadrature.
///
/// `<p>` is exactly zero: every eigenfunction here is real, so
/// `integral psi psi' dx` vanishes identically and is not computed.
/// `<p^2> = integral (psi')^2 dx` with `psi'` analytic.
pub fn moments_quadrature(h: &HamCoeffs, n: usize, rule: &QuadratureRule) -> Result<MomentReport> {
    let state = EigenState::new(h, n, rule)?;
    Ok(state_moments(&state, rule))
}

pub fn state_moments(state: &EigenState, rule: &QuadratureRule) -> MomentReport {
    let mean_x = state.expectation(rule, |x| x);
    let var_x = state.expectation(rule, |x| (x - mean_x).powi(2));
    let mean_p2 = state.derivative_square_integral(rule);
    MomentReport::from_moments(mean_x, var_x, mean_p2)
}

/// Closed-form ground-state moments.
///
/// `<x>_0` is the centre of the Gaussian, `C + 2EA/(1-B)`. The expression
/// `(2EA + C)/(1-B)` sometimes quoted for it agrees only when `B C = 0`;
/// see [`printed_ground_mean`].
pub fn ground_moments_closed(h: &HamCoeffs) -> Result<MomentReport> {
    h.check_admissible()?;
    let HamCoeffs { a, b, c, e, .. } = *h;
    let var_x = a / (b - 1.0);
    let mean_x = c + 2.0 * e * a / (1.0 - b);
    let mean_p2 = (b - 1.0) / (4.0 * a);
    let mut report = MomentReport::from_moments(mean_x, var_x, mean_p2);
    report.mean_x2 = var_x + (2.0 * e * a / (b - 1.0) - c).powi(2);
    Ok(report)
}

/// The alternative ground-state mean `(2EA + C)/(1 - B)`, kept for the
/// discrepancy report. Equal to the true mean only when `B C = 0`.
pub fn printed_ground_mean(h: &HamCoeffs) -> f64 {
    (2.0 * h.e * h.a + h.c) / (1.0 - h.b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Squeezing {
    pub x: bool,
    pub p: bool,
}

/// Ground-state squeezing from the coefficients alone:
/// x-squeezed iff `B < 2A + 1`, p-squeezed iff `B > 2A + 1`.
///
/// Assumes admissible coefficients.
pub fn squeezing_verdict_ground(h: &HamCoeffs) -> Squeezing {
    let edge = 2.0 * h.a + 1.0;
    Squeezing {
        x: h.b < edge - SQUEEZE_TOL,
        p: h.b > edge + SQUEEZE_TOL,
    }
}

/// The Laguerre-ratio expression for the position variance of
/// the shifted-creation-operator states,
///
/// ```text
/// 2n + 1/2 - (2 l^2 + 1) L_{n-1}^(1)(-l^2)/L_n(-l^2) - 2 l^2 (L_n^(1)(-l^2)/L_n(-l^2))^2
/// ```
///
/// evaluated verbatim. It does not reproduce the variance of those states
/// (it goes negative at `n = 1, l = 1`); use
/// [`variance_lambda_shift_oracle`] for the actual value.
pub fn laguerre_variance_formula(n: usize, lambda: f64) -> f64 {
    let l2 = lambda * lambda;
    let n = n as i64;
    let base = laguerre(n, 0, -l2);
    2.0 * n as f64 + 0.5
        - (2.0 * l2 + 1.0) * laguerre(n - 1, 1, -l2) / base
        - 2.0 * l2 * (laguerre(n, 1, -l2) / base).powi(2)
}

/// Position variance of the normalized state
/// `exp(-x^2/2) H_n(x + lambda/sqrt 2)`, by direct quadrature against
/// `exp(-x^2)`.
pub fn variance_lambda_shift_oracle(n: usize, lambda: f64, rule: &QuadratureRule) -> f64 {
    let shift = lambda * FRAC_1_SQRT_2;
    let dens = |x: f64| hermite(n, x + shift).powi(2);
    let norm = rule.integrate(dens);
    let mean = rule.integrate(|x| x * dens(x)) / norm;
    rule.integrate(|x| (x - mean).powi(2) * dens(x)) / norm
}

/// Full moment report of the shifted state `exp(-x^2/2) H_n(x + lambda/sqrt 2)`.
pub fn lambda_shift_moments(n: usize, lambda: f64, rule: &QuadratureRule) -> MomentReport {
    let shift = lambda * FRAC_1_SQRT_2;
    let dens = |x: f64| hermite(n, x + shift).powi(2);
    let norm = rule.integrate(dens);
    let mean = rule.integrate(|x| x * dens(x)) / norm;
    let var_x = rule.integrate(|x| (x - mean).powi(2) * dens(x)) / norm;
    // d/dx [exp(-x^2/2) H_n(y)] = exp(-x^2/2) (2n H_{n-1}(y) - x H_n(y))
    let mean_p2 = rule.integrate(|x| {
        let (hn, hm1) = hermite_pair(n, x + shift);
        (2.0 * n as f64 * hm1 - x * hn).powi(2)
    }) / norm;
    MomentReport::from_moments(mean, var_x, mean_p2)
}

/// Moments of level `n` of `kind` at `lambda`, routed like
/// [`preset_variance_x`].
pub fn preset_moments(
    kind: PresetKind,
    n: usize,
    lambda: f64,
    rule: &QuadratureRule,
) -> Result<MomentReport> {
    if kind == PresetKind::LambdaShift {
        kind.check_lambda(lambda)?;
        return Ok(lambda_shift_moments(n, lambda, rule));
    }
    let h = preset(PresetId::new(kind, lambda)?)?.coeffs();
    moments_quadrature(&h, n, rule)
}

/// `(3 + l^4) / (2 (1 + l^2)^2)`: the `n = 1` case of
/// [`variance_lambda_shift_oracle`] in closed form.
pub fn lambda_shift_variance_n1(lambda: f64) -> f64 {
    let l2 = lambda * lambda;
    (3.0 + l2 * l2) / (2.0 * (1.0 + l2).powi(2))
}

/// Normalization of the shifted states, `integral exp(-x^2) H_n(x+s)^2 dx`
/// equals `sqrt(pi) 2^n n! L_n(-lambda^2)`.
pub fn lambda_shift_norm_integral(n: usize, lambda: f64) -> f64 {
    PI.sqrt()
        * 2f64.powi(n as i32)
        * crate::specialfn::factorial(n)
        * laguerre(n as i64, 0, -lambda * lambda)
}

/// Uniform grid of `steps` points over `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaGrid {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl LambdaGrid {
    pub fn new(min: f64, max: f64, steps: usize) -> Result<Self> {
        let grid = Self { min, max, steps };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::InvalidGrid(format!("steps = {} < 2", self.steps)));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            return Err(Error::InvalidGrid(format!(
                "need finite min < max, got [{}, {}]",
                self.min, self.max
            )));
        }
        Ok(())
    }

    /// Checks that both ends fall in `kind`'s validity range.
    pub fn validate_for(&self, kind: PresetKind) -> Result<()> {
        self.validate()?;
        kind.check_lambda(self.min)?;
        kind.check_lambda(self.max)
    }

    pub fn points(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| self.min + (self.max - self.min) * (i as f64 / last))
            .collect()
    }
}

/// One connected run of squeezed `lambda` values. `None` bounds mean the
/// run reaches the end of the scanned grid and may continue beyond it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowInterval {
    pub lo: Option<f64>,
    pub hi: Option<f64>,
}

impl WindowInterval {
    pub fn contains(&self, lambda: f64) -> bool {
        self.lo.is_none_or(|lo| lambda > lo) && self.hi.is_none_or(|hi| lambda < hi)
    }
}

/// The region `{lambda : var_x(n, lambda) < 1/2}` over a scanned grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SqueezingWindow {
    pub preset: PresetKind,
    pub n: usize,
    pub intervals: Vec<WindowInterval>,
    pub resolution: f64,
}

impl SqueezingWindow {
    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, lambda: f64) -> bool {
        self.intervals.iter().any(|w| w.contains(lambda))
    }
}

/// Position variance of level `n` of `kind` at `lambda`.
///
/// `lambda_shift` goes through [`variance_lambda_shift_oracle`]; every
/// other preset through the eigenstate quadrature.
pub fn preset_variance_x(
    kind: PresetKind,
    n: usize,
    lambda: f64,
    rule: &QuadratureRule,
) -> Result<f64> {
    if kind == PresetKind::LambdaShift {
        kind.check_lambda(lambda)?;
        return Ok(variance_lambda_shift_oracle(n, lambda, rule));
    }
    let h = preset(PresetId::new(kind, lambda)?)?.coeffs();
    Ok(moments_quadrature(&h, n, rule)?.var_x)
}

/// Locates the squeezing window of level `n` over `grid`, refining each
/// boundary by bisection to `WINDOW_RESOLUTION`.
pub fn squeezing_window_scan(
    kind: PresetKind,
    n: usize,
    grid: &LambdaGrid,
    rule: &QuadratureRule,
) -> Result<SqueezingWindow> {
    grid.validate_for(kind)?;
    let squeezed_at = |lambda: f64| preset_variance_x(kind, n, lambda, rule).map(is_squeezed);
    let lambdas = grid.points();
    let flags = lambdas
        .par_iter()
        .map(|&l| squeezed_at(l))
        .collect::<Result<Vec<bool>>>()?;

    let boundary = |i: usize| -> Result<f64> {
        let (mut lo, mut hi) = (lambdas[i], lambdas[i + 1]);
        let lo_flag = flags[i];
        while hi - lo > WINDOW_RESOLUTION / 4.0 {
            let mid = 0.5 * (lo + hi);
            if squeezed_at(mid)? == lo_flag {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    };

    let mut intervals = Vec::new();
    let mut open: Option<Option<f64>> = flags[0].then_some(None);
    for i in 0..flags.len() - 1 {
        match (flags[i], flags[i + 1]) {
            (false, true) => open = Some(Some(boundary(i)?)),
            (true, false) => {
                let lo = open.take().flatten();
                intervals.push(WindowInterval {
                    lo,
                    hi: Some(boundary(i)?),
                });
            }
            _ => {}
        }
    }
    if let Some(lo) = open {
        intervals.push(WindowInterval { lo, hi: None });
    }
    Ok(SqueezingWindow {
        preset: kind,
        n,
        intervals,
        resolution: WINDOW_RESOLUTION,
    })
}

/// Radius `r(n)` of the interval `]-r, r[` outside of which level `n` of
/// the `lambda_shift` family is x-squeezed, found on `(0, lambda_max]`.
/// `None` when no boundary lies in that range.
pub fn lambda_shift_radius(
    n: usize,
    lambda_max: f64,
    rule: &QuadratureRule,
) -> Result<Option<f64>> {
    let grid = LambdaGrid::new(1e-3, lambda_max, 400)?;
    let window = squeezing_window_scan(PresetKind::LambdaShift, n, &grid, rule)?;
    Ok(window
        .intervals
        .iter()
        .filter_map(|w| w.lo)
        .reduce(f64::min))
}
