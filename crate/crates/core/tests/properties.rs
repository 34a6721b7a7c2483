use proptest::prelude::*;
use rellich::constants::{excluded_alphas, parabola};
use rellich::radial::{sample_profiles, RadialProfile};
use rellich::verifier::rellich_quotient;
use rellich::*;

fn exponent() -> impl Strategy<Value = Exponent> {
    prop_oneof![
        (1.0f64..8.0).prop_map(Exponent::Finite),
        Just(Exponent::Finite(1.0)),
        Just(Exponent::Infinite),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn kelvin_dual_preserves_gamma(dim in 3u32..10, p in exponent(), alpha in -4.0f64..6.0) {
        let beta = kelvin_dual(dim, p, alpha);
        let g = gamma_p(&ProblemParams::new(dim, p, alpha)).re;
        let h = gamma_p(&ProblemParams::new(dim, p, beta)).re;
        prop_assert!((g - h).abs() <= 1e-12 * (1.0 + g.abs()));
        // the dual weight is an involution
        prop_assert!((kelvin_dual(dim, p, beta) - alpha).abs() < 1e-12);
    }

    #[test]
    fn shifted_gamma_factorises(dim in 2u32..10, p in exponent(), alpha in -4.0f64..6.0, n in 0u32..12) {
        let params = ProblemParams::new(dim, p, alpha);
        let nd = dim as f64;
        let lhs = lambda_n(dim, n) + gamma_p(&params).re;
        let n = n as f64;
        let rhs = (nd * p.inv() - 2.0 + alpha + n) * (nd * p.conj_inv() - alpha + n);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
    }

    #[test]
    fn parabola_points_are_members(
        dim in 2u32..8, p in exponent(), alpha in -3.0f64..4.0,
        c_re in -2.0f64..2.0, c_im in -2.0f64..2.0, xi in -6.0f64..6.0,
    ) {
        let params = ProblemParams::new(dim, p, alpha).with_c(C64::new(c_re, c_im));
        let par = parabola(&params);
        let z = par.point(xi);
        prop_assert!(dist_numeric(z, &par).distance < 1e-10 * (1.0 + z.norm()));
    }

    #[test]
    fn closed_and_numeric_distances_agree(lambda in -20.0f64..20.0, kappa in -4.0f64..4.0) {
        let par = Parabola::new(2.0 * kappa, C64::new(0.0, 0.0));
        let numeric = dist_numeric(C64::new(lambda, 0.0), &par).distance;
        prop_assert!((numeric * numeric - dist_to_parabola_closed(lambda, kappa)).abs() < 1e-8);
    }

    #[test]
    fn half_space_rate_dominates(dim in 2u32..10, p in exponent(), c in -2.0f64..2.0) {
        let gap = omega_p_plus(dim, p, c) - omega_p(dim, p, c);
        let t = p.inv();
        prop_assert!((gap - 4.0 * (dim as f64 - 1.0) * (t - t * t)).abs() < 1e-12);
        prop_assert!(gap >= -1e-15);
        if p == Exponent::Finite(1.0) || p.is_infinite() {
            prop_assert!(gap.abs() < 1e-15);
        }
    }

    #[test]
    fn certified_constants_imply_validity(
        dim in 2u32..7, p in exponent(), alpha in -2.0f64..3.0, b in -5.0f64..5.0,
    ) {
        let params = ProblemParams::new(dim, p, alpha).with_b(C64::new(b, 0.0));
        match best_constant(&params) {
            Ok(est) => {
                prop_assert!(rellich_validity(&params, None).unwrap().holds);
                prop_assert!(est.lower <= est.upper + 1e-12);
                if est.kind == EstimateKind::Exact {
                    prop_assert_eq!(Some(est.lower), est.value);
                }
            }
            Err(Error::InvalidInequality { modes }) => prop_assert!(!modes.is_empty()),
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn excluded_weights_are_zeros_of_the_shifted_gamma(dim in 2u32..8, p in 1.1f64..6.0) {
        let e = Exponent::Finite(p);
        for w in excluded_alphas(dim, e, 6) {
            let params = ProblemParams::new(dim, e, w.alpha);
            let v = lambda_n(dim, w.n) + gamma_p(&params).re;
            prop_assert!(v.abs() < 1e-9, "α = {} n = {}: {}", w.alpha, w.n, v);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn quotient_is_dilation_invariant(
        seed in 0u64..1000, lambda in 0.05f64..20.0, p in 1.0f64..5.0, alpha in -1.0f64..2.0, n in 0u32..4,
    ) {
        let f = &sample_profiles(1, seed)[0];
        let params = ProblemParams::new(3, Exponent::Finite(p), alpha);
        let spec = QuadratureSpec::with_tol(1e-11);
        let a = rellich_quotient(&params, n, f, &spec).unwrap().quotient;
        let b = rellich_quotient(&params, n, &f.dilate(lambda), &spec).unwrap().quotient;
        prop_assert!((a / b - 1.0).abs() < 1e-8, "{a} vs {b}");
    }

    #[test]
    fn plateau_quotients_respect_exact_constants(
        lo in -5.0f64..3.0, width in 0.2f64..4.0, t in 0.2f64..2.0, alpha in -0.5f64..1.5,
    ) {
        let params = ProblemParams::new(5, Exponent::Finite(2.0), alpha);
        let f = RadialProfile::plateau(lo, lo + width, t);
        let est = best_constant(&params).unwrap();
        let q = rellich_quotient(&params, 0, &f, &QuadratureSpec::default()).unwrap();
        prop_assert!(q.quotient >= est.lower - 1e-6);
    }
}
