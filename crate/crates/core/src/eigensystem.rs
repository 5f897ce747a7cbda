//! Eigenvalues and normalized eigenfunctions of the deformed Hamiltonian.
//!
//! With `x = p y + q`, `p = sqrt(-2A)` and `q = 2EA - BC`, the eigenfunctions
//! are
//!
//! ```text
//! psi_n(x) = N_n exp[(1-B)/(4A) x^2] exp[((B-1)C/(2A) - E) x] exp[q^2/(4A)] H_n((x-q)/p)
//! ```
//!
//! All of them share one Gaussian envelope, so integrals of products of
//! eigenfunctions (and of their derivatives) are a polynomial times
//! `exp(-t^2)` after centring and scaling that envelope, and Gauss-Hermite
//! quadrature is exact for them up to rounding.

use std::f64::consts::PI;

use crate::deformation::{CParams, HamCoeffs, PresetId, PresetKind};
use crate::error::{Error, Result};
use crate::specialfn::{
    f_n, hermite_derivatives, hermite_pair, laguerre, ln_factorial, QuadratureRule,
};

/// `x = p y + q` mapping the physical coordinate onto the Hermite argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChangeOfVariable {
    pub p: f64,
    pub q: f64,
}

impl ChangeOfVariable {
    pub fn to_hermite_arg(&self, x: f64) -> f64 {
        (x - self.q) / self.p
    }
}

/// `p = sqrt(-2A) > 0`, `q = 2EA - BC`.
pub fn change_of_variable(h: &HamCoeffs) -> Result<ChangeOfVariable> {
    h.check_admissible()?;
    Ok(ChangeOfVariable {
        p: (-2.0 * h.a).sqrt(),
        q: 2.0 * h.e * h.a - h.b * h.c,
    })
}

/// The energy of level `n`, evaluated term by term from the coefficients
/// and the change of variable.
///
/// For coefficients coming from a constraint-satisfying [`CParams`] this is
/// `n + 1/2` whatever the deformation.
pub fn energy_general(h: &HamCoeffs, cov: &ChangeOfVariable, n: usize) -> f64 {
    let HamCoeffs { a, b, c, d, e, f } = *h;
    let (p, q) = (cov.p, cov.q);
    f - b / 2.0 - c * c / (4.0 * a) - a / (p * p) * (2.0 * n as f64 + 1.0)
        + q * q * (d - b * b / (4.0 * a))
        + q * (e - b * c / (2.0 * a))
}

/// The Gaussian envelope `exp(quad x^2 + lin x)` shared by every
/// eigenfunction of one Hamiltonian, rewritten around its centre.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Envelope {
    /// `(1-B)/(4A) < 0`
    quad: f64,
    lin: f64,
    /// `(2EA-BC)^2/(4A)`
    constant: f64,
    /// centre of `psi^2`, `-lin / (2 quad)`
    center: f64,
    /// `x = center + scale t` turns `psi^2`'s envelope into `exp(-t^2)`
    scale: f64,
}

impl Envelope {
    fn new(h: &HamCoeffs, cov: &ChangeOfVariable) -> Self {
        let quad = (1.0 - h.b) / (4.0 * h.a);
        let lin = (h.b - 1.0) * h.c / (2.0 * h.a) - h.e;
        let center = -lin / (2.0 * quad);
        Self {
            quad,
            lin,
            constant: cov.q * cov.q / (4.0 * h.a),
            center,
            scale: 1.0 / (-2.0 * quad).sqrt(),
        }
    }

    /// Quadrature points `(x_i, w_i)` such that
    /// `integral exp(2 quad (x - center)^2) g(x) dx = sum w_i g(x_i)`.
    pub(crate) fn points<'a>(
        &'a self,
        rule: &'a QuadratureRule,
    ) -> impl Iterator<Item = (f64, f64)> + 'a {
        rule.iter()
            .map(move |(t, w)| (self.center + self.scale * t, self.scale * w))
    }

    /// Offset between the centred form and the raw exponent:
    /// `quad x^2 + lin x + constant = quad (x - center)^2 + shift`.
    fn shift(&self) -> f64 {
        self.constant - self.quad * self.center * self.center
    }
}

/// A normalized eigenstate `psi_n`.
///
/// The sign convention is `N_n > 0` with `p > 0`, so `psi_n(x) > 0` as
/// `x -> +infinity`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenState {
    n: usize,
    coeffs: HamCoeffs,
    cov: ChangeOfVariable,
    envelope: Envelope,
    /// `ln N_n`
    log_norm: f64,
    /// `ln N_n + shift`; `psi = exp(log_peak + quad (x-center)^2) H_n(y)`
    log_peak: f64,
}

impl EigenState {
    /// Builds and normalizes `psi_n` by quadrature.
    pub fn new(h: &HamCoeffs, n: usize, rule: &QuadratureRule) -> Result<Self> {
        let cov = change_of_variable(h)?;
        let envelope = Envelope::new(h, &cov);
        let integral: f64 = envelope
            .points(rule)
            .map(|(x, w)| w * hermite_pair(n, cov.to_hermite_arg(x)).0.powi(2))
            .sum();
        if !(integral.is_finite() && integral > 0.0) {
            return Err(Error::NormNotFinite { n });
        }
        let log_peak = -0.5 * integral.ln();
        Ok(Self {
            n,
            coeffs: *h,
            cov,
            envelope,
            log_norm: log_peak - envelope.shift(),
            log_peak,
        })
    }

    pub fn from_params(c: &CParams, n: usize, rule: &QuadratureRule) -> Result<Self> {
        Self::new(&c.coeffs(), n, rule)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &HamCoeffs {
        &self.coeffs
    }

    pub fn change_of_variable(&self) -> &ChangeOfVariable {
        &self.cov
    }

    /// `N_n`, the prefactor in front of the unnormalized closed form.
    pub fn norm(&self) -> f64 {
        self.log_norm.exp()
    }

    pub fn log_norm(&self) -> f64 {
        self.log_norm
    }

    pub fn energy(&self) -> f64 {
        energy_general(&self.coeffs, &self.cov, self.n)
    }

    /// Centre of the Gaussian envelope of `psi_n^2`.
    pub fn envelope_center(&self) -> f64 {
        self.envelope.center
    }

    /// Standard deviation of the envelope `exp(2 quad (x-center)^2)`.
    pub fn envelope_width(&self) -> f64 {
        self.envelope.scale / std::f64::consts::SQRT_2
    }

    pub fn eval(&self, x: f64) -> f64 {
        let dx = x - self.envelope.center;
        let (h, _) = hermite_pair(self.n, self.cov.to_hermite_arg(x));
        (self.log_peak + self.envelope.quad * dx * dx).exp() * h
    }

    /// `[psi, psi', psi'']` at `x`, with the Hermite derivatives taken
    /// analytically.
    pub fn eval_derivatives(&self, x: f64) -> [f64; 3] {
        let dx = x - self.envelope.center;
        let gauss = (self.log_peak + self.envelope.quad * dx * dx).exp();
        let [h, dh, ddh] = self.hermite_parts(x);
        let g1 = 2.0 * self.envelope.quad * dx;
        let g2 = 2.0 * self.envelope.quad;
        [
            gauss * h,
            gauss * (g1 * h + dh),
            gauss * ((g2 + g1 * g1) * h + 2.0 * g1 * dh + ddh),
        ]
    }

    /// Polynomial part of `psi` and its x-derivatives (chain rule through
    /// `y = (x - q)/p`).
    fn hermite_parts(&self, x: f64) -> [f64; 3] {
        let p = self.cov.p;
        let [h, dh, ddh] = hermite_derivatives(self.n, self.cov.to_hermite_arg(x));
        [h, dh / p, ddh / (p * p)]
    }

    /// Pointwise `H psi - (n + 1/2) psi`, divided by the sum of the absolute
    /// values of the individual terms plus `p |psi'| / 2`. The last term
    /// keeps the measure finite at the zeros of `psi`, where every other
    /// term vanishes with it.
    pub fn equation_residual(&self, x: f64) -> f64 {
        let HamCoeffs { a, b, c, d, e, f } = self.coeffs;
        let [psi, d1, d2] = self.eval_derivatives(x);
        let energy = self.n as f64 + 0.5;
        let terms = [
            a * d2,
            (b * x + c) * d1,
            (d * x * x + e * x + f) * psi,
            -energy * psi,
        ];
        let scale: f64 = terms.iter().map(|t| t.abs()).sum::<f64>() + 0.5 * self.cov.p * d1.abs();
        if scale == 0.0 {
            return 0.0;
        }
        terms.iter().sum::<f64>().abs() / scale
    }

    /// Number of sign changes of `psi_n` on a uniform grid that covers all
    /// zeros of `H_n` with a margin of one `p` on each side.
    pub fn count_sign_changes(&self, points: usize) -> usize {
        let half = self.cov.p * ((2.0 * self.n as f64 + 1.0).sqrt() + 1.0);
        let (lo, hi) = (self.cov.q - half, self.cov.q + half);
        let step = (hi - lo) / (points.max(2) - 1) as f64;
        let mut changes = 0;
        let mut last = 0.0f64;
        for i in 0..points.max(2) {
            let v = self.eval(lo + step * i as f64);
            if v != 0.0 {
                if last != 0.0 && v.signum() != last.signum() {
                    changes += 1;
                }
                last = v;
            }
        }
        changes
    }

    /// `integral psi^2 g(x) dx`.
    pub fn expectation<F: Fn(f64) -> f64>(&self, rule: &QuadratureRule, g: F) -> f64 {
        let amp = (2.0 * self.log_peak).exp();
        amp * self
            .envelope
            .points(rule)
            .map(|(x, w)| w * hermite_pair(self.n, self.cov.to_hermite_arg(x)).0.powi(2) * g(x))
            .sum::<f64>()
    }

    /// `integral (psi')^2 dx = <p^2>` for real `psi`.
    pub fn derivative_square_integral(&self, rule: &QuadratureRule) -> f64 {
        let amp = (2.0 * self.log_peak).exp();
        amp * self
            .envelope
            .points(rule)
            .map(|(x, w)| {
                let [h, dh, _] = self.hermite_parts(x);
                let g1 = 2.0 * self.envelope.quad * (x - self.envelope.center);
                w * (g1 * h + dh).powi(2)
            })
            .sum::<f64>()
    }

    /// `integral self * other dx`; both must belong to the same Hamiltonian.
    pub fn overlap(&self, other: &EigenState, rule: &QuadratureRule) -> f64 {
        debug_assert_eq!(self.coeffs, other.coeffs);
        let amp = (self.log_peak + other.log_peak).exp();
        amp * self
            .envelope
            .points(rule)
            .map(|(x, w)| {
                let y = self.cov.to_hermite_arg(x);
                w * hermite_pair(self.n, y).0 * hermite_pair(other.n, y).0
            })
            .sum::<f64>()
    }
}

/// `psi_n(x)` for a prepared state.
pub fn eval_eigenfunction(state: &EigenState, x: f64) -> f64 {
    state.eval(x)
}

/// `N_n` by quadrature.
pub fn normalize(h: &HamCoeffs, n: usize, rule: &QuadratureRule) -> Result<f64> {
    Ok(EigenState::new(h, n, rule)?.norm())
}

/// Exponent parameters of the ground state
/// `psi_0 = N_0 exp(-alpha x^2 / 2 - beta x - gamma / 2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundStateForm {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl GroundStateForm {
    /// `N_0 = (alpha/pi)^(1/4) exp[(alpha gamma - beta^2) / (2 alpha)]`.
    pub fn norm(&self) -> f64 {
        (self.alpha / PI).powf(0.25)
            * ((self.alpha * self.gamma - self.beta * self.beta) / (2.0 * self.alpha)).exp()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.norm() * (-0.5 * self.alpha * x * x - self.beta * x - 0.5 * self.gamma).exp()
    }
}

pub fn ground_state_form(h: &HamCoeffs) -> Result<GroundStateForm> {
    h.check_admissible()?;
    let HamCoeffs { a, b, c, e, .. } = *h;
    let q = 2.0 * e * a - b * c;
    Ok(GroundStateForm {
        alpha: (b - 1.0) / (2.0 * a),
        beta: e - (b - 1.0) * c / (2.0 * a),
        gamma: -q * q / (2.0 * a),
    })
}

/// `G[m][n] = integral psi_m psi_n dx` for `0 <= m, n <= n_max`.
pub fn gram_matrix(h: &HamCoeffs, n_max: usize, rule: &QuadratureRule) -> Result<Vec<Vec<f64>>> {
    let states = (0..=n_max)
        .map(|n| EigenState::new(h, n, rule))
        .collect::<Result<Vec<_>>>()?;
    Ok(states
        .iter()
        .map(|sm| states.iter().map(|sn| sm.overlap(sn, rule)).collect())
        .collect())
}

/// Closed-form `N_n` for each preset, expressed for
/// the same unnormalized function [`EigenState`] uses.
///
/// The usual `lambda_shift` form omits the constant `exp(q^2/(4A))`
/// factor, so that factor (`exp(-lambda^2/4)`) is divided back out here.
pub fn closed_form_norm(id: PresetId, n: usize) -> Option<f64> {
    let ln_pre = -0.25 * PI.ln() - 0.5 * n as f64 * std::f64::consts::LN_2 - 0.5 * ln_factorial(n);
    let lambda = id.lambda;
    match id.kind {
        PresetKind::Harmonic => Some(ln_pre.exp()),
        PresetKind::CaseI => Some(3f64.sqrt() * ln_pre.exp()),
        PresetKind::CaseII => Some(lambda.powf(0.25) * ln_pre.exp()),
        PresetKind::CaseIII => Some(case_iii_closed_norm(lambda, n)),
        PresetKind::LambdaShift => {
            let lag = laguerre(n as i64, 0, -lambda * lambda);
            Some((ln_pre - 0.5 * lag.ln() + lambda * lambda / 4.0).exp())
        }
    }
}

/// `pi^(-1/4) / n! ((1+l)/(1-l))^(1/4) (1+l)^(n/2) F_n(l)^(-1/2)`.
pub fn case_iii_closed_norm(lambda: f64, n: usize) -> f64 {
    let ln = -0.25 * PI.ln() - ln_factorial(n)
        + 0.25 * ((1.0 + lambda) / (1.0 - lambda)).ln()
        + 0.5 * n as f64 * (1.0 + lambda).ln()
        - 0.5 * f_n(n, lambda).ln();
    ln.exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deformation::preset;
    use crate::specialfn::{gauss_hermite, hermite, DEFAULT_QUAD_ORDER};
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::SQRT_2;

    fn rule() -> QuadratureRule {
        gauss_hermite(DEFAULT_QUAD_ORDER).unwrap()
    }

    fn coeffs(kind: PresetKind, lambda: f64) -> HamCoeffs {
        preset(PresetId::new(kind, lambda).unwrap())
            .unwrap()
            .coeffs()
    }

    #[test]
    fn change_of_variable_examples() {
        let cov = change_of_variable(&CParams::HARMONIC.coeffs()).unwrap();
        assert_eq!(cov, ChangeOfVariable { p: 1.0, q: 0.0 });

        let lambda = 0.8;
        let cov = change_of_variable(&coeffs(PresetKind::CaseI, lambda)).unwrap();
        assert_relative_eq!(cov.p, 1.0 / 3.0, max_relative = 1e-14);
        assert_relative_eq!(cov.q, -SQRT_2 * lambda / 3.0, max_relative = 1e-14);

        let cov = change_of_variable(&coeffs(PresetKind::CaseIII, 0.3)).unwrap();
        assert_relative_eq!(cov.p, 0.7f64.sqrt(), max_relative = 1e-15);
        assert_eq!(cov.q, 0.0);
    }

    #[test]
    fn change_of_variable_satisfies_its_defining_constraints() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut checked = 0;
        while checked < 200 {
            let h = CParams::sample(&mut rng, 0.8).coeffs();
            if !h.is_admissible() {
                continue;
            }
            checked += 1;
            let ChangeOfVariable { p, q } = change_of_variable(&h).unwrap();
            let k = h.d - h.b * h.b / (4.0 * h.a);
            assert!((p.powi(4) / h.a * k + 1.0).abs() < 1e-10);
            assert!((2.0 * q * k + h.e - h.b * h.c / (2.0 * h.a)).abs() < 1e-10);
        }
    }

    #[test]
    fn inadmissible_rejected() {
        let h = coeffs(PresetKind::CaseIII, 0.5);
        let bad = HamCoeffs { a: 0.25, ..h };
        assert!(change_of_variable(&bad).is_err());
        assert!(ground_state_form(&bad).is_err());
        assert!(EigenState::new(&HamCoeffs { b: 1.5, ..h }, 0, &rule()).is_err());
    }

    #[test]
    fn energies() {
        let h = CParams::HARMONIC.coeffs();
        assert_eq!(energy_general(&h, &change_of_variable(&h).unwrap(), 0), 0.5);
        let h = coeffs(PresetKind::CaseI, 1.0);
        let e = energy_general(&h, &change_of_variable(&h).unwrap(), 2);
        assert!((e - 2.5).abs() < 1e-12);
    }

    #[test]
    fn random_spectrum_is_unchanged() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut checked = 0;
        while checked < 1000 {
            let h = CParams::sample(&mut rng, 1.0).coeffs();
            if !h.is_admissible() {
                continue;
            }
            checked += 1;
            let cov = change_of_variable(&h).unwrap();
            for n in 0..=5 {
                assert!((energy_general(&h, &cov, n) - (n as f64 + 0.5)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn harmonic_ground_state_at_origin() {
        let s = EigenState::new(&CParams::HARMONIC.coeffs(), 0, &rule()).unwrap();
        assert_relative_eq!(s.eval(0.0), PI.powf(-0.25), max_relative = 1e-14);
    }

    #[test]
    fn case_i_matches_closed_eigenfunction() {
        let r = rule();
        let lambda = 0.6;
        let h = coeffs(PresetKind::CaseI, lambda);
        for n in 0..=6 {
            let s = EigenState::new(&h, n, &r).unwrap();
            let norm = 3f64.sqrt() * PI.powf(-0.25) * 2f64.powf(-(n as f64) / 2.0)
                / crate::specialfn::factorial(n).sqrt();
            for i in 0..=20 {
                let x = -1.2 + 0.06 * i as f64;
                let expected = norm
                    * (-4.5 * x * x - 6.0 / SQRT_2 * lambda * x - lambda * lambda).exp()
                    * hermite(n, 3.0 * x + SQRT_2 * lambda);
                assert!(
                    (s.eval(x) - expected).abs() <= 1e-11 * expected.abs().max(1e-3),
                    "n={n} x={x}"
                );
            }
        }
    }

    #[test]
    fn lambda_shift_matches_shifted_hermite_states() {
        let r = rule();
        for lambda in [-1.3, 0.5, 1.0, 2.0] {
            let h = coeffs(PresetKind::LambdaShift, lambda);
            for n in 0..=5 {
                let s = EigenState::new(&h, n, &r).unwrap();
                let norm = 2f64.powf(-(n as f64) / 2.0) * PI.powf(-0.25)
                    / (crate::specialfn::factorial(n) * laguerre(n as i64, 0, -lambda * lambda))
                        .sqrt();
                for i in 0..=16 {
                    let x = -4.0 + 0.5 * i as f64;
                    let expected = norm * (-x * x / 2.0).exp() * hermite(n, x + lambda / SQRT_2);
                    assert!(
                        (s.eval(x) - expected).abs() < 1e-12,
                        "lambda={lambda} n={n} x={x}"
                    );
                }
            }
        }
    }

    #[test]
    fn closed_norms_match_quadrature() {
        let r = rule();
        let cases = [
            (PresetKind::Harmonic, 0.0),
            (PresetKind::CaseI, -0.7),
            (PresetKind::CaseI, 1.4),
            (PresetKind::CaseII, 0.3),
            (PresetKind::CaseII, 5.0),
            (PresetKind::LambdaShift, 1.1),
            (PresetKind::CaseIII, 0.0),
            (PresetKind::CaseIII, 0.5),
            (PresetKind::CaseIII, -0.6),
        ];
        for (kind, lambda) in cases {
            let id = PresetId::new(kind, lambda).unwrap();
            let h = preset(id).unwrap().coeffs();
            for n in 0..=10 {
                let quad = normalize(&h, n, &r).unwrap();
                let closed = closed_form_norm(id, n).unwrap();
                assert_relative_eq!(quad, closed, max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn case_iii_norm_reduces_to_harmonic() {
        for n in 0..=12 {
            let harmonic = closed_form_norm(PresetId::harmonic(), n).unwrap();
            assert_relative_eq!(case_iii_closed_norm(0.0, n), harmonic, max_relative = 1e-12);
        }
    }

    #[test]
    fn normalization_unit_and_positive() {
        let r = rule();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut checked = 0;
        while checked < 100 {
            let h = CParams::sample(&mut rng, 0.7).coeffs();
            if !h.is_admissible() {
                continue;
            }
            checked += 1;
            for n in [0, 1, 4, 9] {
                let s = EigenState::new(&h, n, &r).unwrap();
                assert!(s.norm() > 0.0);
                assert!((s.expectation(&r, |_| 1.0) - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn ground_state_forms() {
        let g = ground_state_form(&CParams::HARMONIC.coeffs()).unwrap();
        assert_eq!((g.alpha, g.beta, g.gamma), (1.0, 0.0, 0.0));
        assert_relative_eq!(g.norm(), PI.powf(-0.25), max_relative = 1e-15);

        let g = ground_state_form(&coeffs(PresetKind::CaseII, 6.0)).unwrap();
        assert_relative_eq!(g.alpha, 6.0, max_relative = 1e-14);
        assert!(g.beta.abs() < 1e-14 && g.gamma.abs() < 1e-14);

        // lambda_shift: alpha = 1, beta = 0, gamma = lambda^2/2, so the
        // shape is exp(-x^2/2) and N_0 absorbs exp(-gamma/2).
        let lambda = 1.7;
        let g = ground_state_form(&coeffs(PresetKind::LambdaShift, lambda)).unwrap();
        assert_relative_eq!(g.alpha, 1.0);
        assert!(g.beta.abs() < 1e-15);
        assert_relative_eq!(g.gamma, lambda * lambda / 2.0, max_relative = 1e-14);
        for x in [-2.0, 0.0, 0.7] {
            assert_relative_eq!(
                g.eval(x),
                PI.powf(-0.25) * (-x * x / 2.0).exp(),
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn ground_state_form_agrees_with_eigenstate() {
        let r = rule();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut checked = 0;
        while checked < 100 {
            let h = CParams::sample(&mut rng, 0.7).coeffs();
            if !h.is_admissible() {
                continue;
            }
            checked += 1;
            let g = ground_state_form(&h).unwrap();
            let s = EigenState::new(&h, 0, &r).unwrap();
            assert_relative_eq!(g.norm(), s.norm(), max_relative = 1e-9);
            let x = s.envelope_center() + 0.3 * s.envelope_width();
            assert_relative_eq!(g.eval(x), s.eval(x), max_relative = 1e-9);
        }
    }

    #[test]
    fn gram_matrices() {
        let r = rule();
        for h in [CParams::HARMONIC.coeffs(), coeffs(PresetKind::CaseII, 5.0)] {
            let g = gram_matrix(&h, 6, &r).unwrap();
            for (m, row) in g.iter().enumerate() {
                for (n, v) in row.iter().enumerate() {
                    let expected = if m == n { 1.0 } else { 0.0 };
                    assert!((v - expected).abs() < 1e-8, "G[{m}][{n}] = {v}");
                }
            }
        }
        let g = gram_matrix(&coeffs(PresetKind::CaseIII, 0.5), 3, &r).unwrap();
        assert!(g[0][2].abs() > 1e-3);
        // regression constant; mpmath at 30 digits gives exactly -1/3
        assert!((g[0][2] + 1.0 / 3.0).abs() < 1e-12, "{}", g[0][2]);
        assert!(
            (g[1][3] + 0.522_232_967_867_093_5).abs() < 1e-12,
            "{}",
            g[1][3]
        );
        for (i, row) in g.iter().enumerate() {
            assert!((row[i] - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn node_counts() {
        let r = rule();
        for (kind, lambda) in [
            (PresetKind::CaseI, 0.4),
            (PresetKind::CaseIII, -0.7),
            (PresetKind::LambdaShift, 2.0),
        ] {
            let h = coeffs(kind, lambda);
            for n in 0..=10 {
                let s = EigenState::new(&h, n, &r).unwrap();
                assert_eq!(s.count_sign_changes(4001), n, "{kind} n={n}");
            }
        }
    }

    #[test]
    fn eigen_equation_residual_small() {
        let r = rule();
        let h = coeffs(PresetKind::CaseIII, 0.5);
        for n in 0..=8 {
            let s = EigenState::new(&h, n, &r).unwrap();
            for i in 0..=50 {
                let x = -3.0 + 0.12 * i as f64;
                assert!(s.equation_residual(x) < 1e-7);
            }
        }
    }

    #[test]
    fn harmonic_reductions_are_exact() {
        let r = rule();
        let harmonic = CParams::HARMONIC.coeffs();
        for (kind, lambda) in [
            (PresetKind::CaseII, 1.0),
            (PresetKind::CaseIII, 0.0),
            (PresetKind::LambdaShift, 0.0),
        ] {
            let h = coeffs(kind, lambda);
            assert_eq!(h, harmonic, "{kind}");
            for n in 0..=5 {
                let a = EigenState::new(&h, n, &r).unwrap();
                let b = EigenState::new(&harmonic, n, &r).unwrap();
                assert_eq!(a, b);
            }
        }
    }
}
