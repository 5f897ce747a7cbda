use oscdeform_core::deformation::constraint_residual;
use oscdeform_core::eigensystem::{change_of_variable, energy_general};
use oscdeform_core::fockspace::{build, build_raw};
use oscdeform_core::moments::{
    ground_moments_closed, moments_quadrature, squeezing_verdict_ground, state_moments,
};
use oscdeform_core::{gauss_hermite, CParams, EigenState, HamCoeffs, QuadratureRule};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rule() -> QuadratureRule {
    gauss_hermite(128).unwrap()
}

/// Constraint-satisfying parameters with admissible coefficients.
fn admissible() -> impl Strategy<Value = CParams> {
    proptest::array::uniform5(-1.0f64..1.0).prop_filter_map(
        "inadmissible",
        |[c1, c2, c3, c4, c6]| {
            CParams::solve_c5(c1, c2, c3, c4, c6)
                .ok()
                .filter(|c| c.coeffs().is_admissible())
        },
    )
}

/// Distance of the farthest zero of `psi_n` from the envelope centre, in
/// envelope widths. The zeros lie within `q +- p sqrt(2n+1)`.
///
/// When this is large `psi_n` is a Gaussian times a polynomial that barely
/// varies across the envelope: it is coherent to within any fixed tolerance
/// and its zeros sit where the envelope underflows. Strong deformations
/// (`1 + c1 + c2 -> 0`, say) do this already at `n = 1`.
fn node_spread(state: &EigenState) -> f64 {
    let cov = state.change_of_variable();
    let reach =
        (cov.q - state.envelope_center()).abs() + cov.p * (2.0 * state.n() as f64 + 1.0).sqrt();
    reach / state.envelope_width()
}

const RESOLVED_SPREAD: f64 = 10.0;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn energies_are_oscillator_levels(c in admissible()) {
        let h = c.coeffs();
        let cov = change_of_variable(&h).unwrap();
        for n in 0..=10 {
            prop_assert!((energy_general(&h, &cov, n) - (n as f64 + 0.5)).abs() < 1e-10);
        }
    }

    #[test]
    fn heisenberg_floor_and_ground_coherence(c in admissible()) {
        let r = rule();
        let h = c.coeffs();
        for n in 0..=6 {
            let state = EigenState::new(&h, n, &r).unwrap();
            let m = state_moments(&state, &r);
            prop_assert!(m.product >= 0.5 - 1e-9, "n={} product {}", n, m.product);
            prop_assert!(!(m.squeezed_x && m.squeezed_p));
            if n == 0 {
                prop_assert!(m.coherent, "product {}", m.product);
            } else if node_spread(&state) <= RESOLVED_SPREAD {
                prop_assert!(!m.coherent, "n={} product {}", n, m.product);
            }
        }
    }

    #[test]
    fn ground_closed_form_matches_quadrature(c in admissible()) {
        let h = c.coeffs();
        let quad = moments_quadrature(&h, 0, &rule()).unwrap();
        let closed = ground_moments_closed(&h).unwrap();
        prop_assert!((quad.mean_x - closed.mean_x).abs() < 1e-9 * (1.0 + closed.mean_x.abs()));
        prop_assert!((quad.var_x - closed.var_x).abs() < 1e-9 * closed.var_x);
        prop_assert!((quad.var_p - closed.var_p).abs() < 1e-9 * closed.var_p);
        let verdict = squeezing_verdict_ground(&h);
        prop_assert_eq!(verdict.x, quad.squeezed_x);
        prop_assert_eq!(verdict.p, quad.squeezed_p);
    }

    #[test]
    fn normalized_states_and_nodes(c in admissible(), n in 0usize..9) {
        let r = rule();
        let state = EigenState::new(&c.coeffs(), n, &r).unwrap();
        prop_assert!((state.expectation(&r, |_| 1.0) - 1.0).abs() < 1e-9);
        if node_spread(&state) <= RESOLVED_SPREAD {
            prop_assert_eq!(state.count_sign_changes(4001), n);
        }
    }

    #[test]
    fn commutator_tracks_constraint(c in admissible(), eps in -1e-3f64..1e-3) {
        let exact = build(&c, 30).unwrap();
        prop_assert!(exact.commutator_residual() < 1e-10);
        let mut raw = c.to_array();
        raw[4] += eps;
        let perturbed = build_raw(raw, 30).unwrap();
        let residual = constraint_residual(&raw).abs();
        prop_assert!((perturbed.commutator_residual() - residual).abs() <= 1e-10 + 1e-9 * residual);
    }

    #[test]
    fn symmetric_matrix_iff_selfadjoint(c in admissible()) {
        let h: HamCoeffs = c.coeffs();
        prop_assert_eq!(build(&c, 24).unwrap().is_symmetric(1e-12), h.is_selfadjoint());
    }
}

#[test]
fn bogoliubov_pairs_are_selfadjoint() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..1000 {
        let c = CParams::sample_mutually_adjoint(&mut rng, 2.0, 3.0);
        assert!(c.is_mutually_adjoint());
        assert!(c.residual().abs() < 1e-12);
        assert!(c.coeffs().is_selfadjoint(), "{c:?}");
    }
}
