use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rellich::constants::{l2_mode_constant, mode_constant};
use rellich::radial::{sample_profiles, RadialProfile};
use rellich::sphere::HarmonicIndex;
use rellich::verifier::*;
use rellich::witness::{cz2_counterexample, hardy_witness, rellich_witness, CutoffFamily, CutoffShape};
use rellich::*;

fn scan_cutoff() -> CutoffFamily {
    CutoffFamily::from_log(50.0, CutoffShape::Stretched).unwrap()
}

fn spec() -> QuadratureSpec {
    QuadratureSpec::with_tol(1e-10)
}

#[test]
fn random_profiles_never_beat_the_exact_constant() {
    let spec = spec();
    for (dim, p, alpha) in [(5u32, 2.0, 0.0), (7, 3.0, 0.0), (4, 2.5, 0.8)] {
        let params = ProblemParams::new(dim, Exponent::Finite(p), alpha);
        let exact = best_constant(&params).unwrap();
        assert_eq!(exact.kind, EstimateKind::Exact);
        for f in sample_profiles(20, 7) {
            let r = rellich_quotient(&params, 0, &f, &spec).unwrap();
            assert!(r.quotient >= exact.lower - 1e-6, "{} < {}", r.quotient, exact.lower);
            assert_eq!(r.verdict, Verdict::SatisfiesBound);
        }
    }
}

#[test]
fn sup_norm_quotient_uses_multiplier_weights() {
    // on the plateau the operand of ρ^{2−α+iξ} is (P(ξ) − b − λ_n) times the profile
    let params = ProblemParams::new(3, Exponent::Infinite, 0.5);
    let cutoff = CutoffFamily::from_log(30.0, CutoffShape::Stretched).unwrap();
    let f = rellich_witness(&params, 0.4, &cutoff);
    let par = rellich::constants::parabola(&params);
    let r = rellich_quotient(&params, 1, &f, &spec()).unwrap();
    let plateau = (par.point(0.4) - lambda_n(3, 1)).norm();
    assert!(r.quotient >= plateau * (1.0 - 1e-9));
    assert!(r.quotient <= plateau * 1.1, "{} vs {plateau}", r.quotient);
    assert_eq!(r.power_quotient, r.quotient);
}

#[test]
fn l2_scan_matches_mode_constants() {
    // the cutoff error is additive, so tiny constants are skipped
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let cutoff = CutoffFamily::from_log(200.0, CutoffShape::Stretched).unwrap();
    let spec = spec();
    let mut done = 0;
    while done < 50 {
        let dim = rng.gen_range(2..=6u32);
        let params = ProblemParams::new(dim, Exponent::Finite(2.0), rng.gen_range(-1.5..2.5))
            .with_b(C64::new(rng.gen_range(-15.0..5.0), 0.0))
            .with_c(C64::new(rng.gen_range(-1.0..1.0), 0.0));
        let n = rng.gen_range(0..=3u32);
        let c = l2_mode_constant(&params, n);
        if c < 0.5 {
            continue;
        }
        let scan = rellich_scan(&params, n, &cutoff, &spec).unwrap();
        let ratio = scan.empirical_inf_power / (c * c);
        assert!((0.98..=1.02).contains(&ratio), "{params:?} n={n}: {ratio}");
        done += 1;
    }
}

#[test]
fn positive_shift_brackets_the_scan() {
    // real b, c with b + γ > 0 and a single mode: the scan sits between the
    // shifted constant and the spectral distance
    let spec = spec();
    for (dim, p, alpha, b, n) in [(5u32, 3.0, 0.2, 2.0, 0u32), (6, 1.5, 1.0, 2.0, 1), (4, 4.0, 0.5, 1.0, 2)] {
        let params = ProblemParams::new(dim, Exponent::Finite(p), alpha).with_b(C64::new(b, 0.0));
        let scan = rellich_scan(&params, n, &scan_cutoff(), &spec).unwrap();
        let shifted = b + lambda_n(dim, n) + gamma_p(&params).re;
        assert!(shifted > 0.0);
        let dist = dist_numeric(params.b + lambda_n(dim, n), &rellich::constants::parabola(&params)).distance;
        assert!(scan.empirical_inf_power >= shifted.powf(p) * 0.98);
        assert!(scan.empirical_inf_power <= dist.powf(p) * 1.02);
    }
}

#[test]
fn scan_infimum_decreases_with_the_cutoff_scale() {
    let params = ProblemParams::new(5, Exponent::Finite(3.0), 0.0);
    let spec = spec();
    let infs: Vec<f64> = [4.0, 8.0, 16.0, 40.0]
        .iter()
        .map(|&lk| rellich_scan(&params, 0, &CutoffFamily::from_log(lk, CutoffShape::Stretched).unwrap(), &spec).unwrap())
        .map(|s| s.empirical_inf)
        .collect();
    assert!(infs.windows(2).all(|w| w[1] <= w[0]), "{infs:?}");
}

#[test]
fn failure_demos_decrease_strictly() {
    let spec = spec();
    let cutoffs: Vec<CutoffFamily> =
        (4..=12).map(|e| CutoffFamily::new(2f64.powi(e), CutoffShape::Narrow).unwrap()).collect();
    for (dim, p, n) in [(4u32, 2.0, 0u32), (6, 3.0, 0), (3, 3.0, 1)] {
        let params = ProblemParams::new(dim, Exponent::Finite(p), 0.0);
        let q = failure_demo(&params, n, &cutoffs, &spec).unwrap();
        assert!(q.windows(2).all(|w| w[1] < w[0]), "{q:?}");
    }
}

#[test]
fn kelvin_pairs_share_scan_infima() {
    let spec = spec();
    for (dim, p, alpha) in [(3u32, 2.5, 0.3), (4, 1.6, 0.9), (5, 3.0, -0.5)] {
        let dual = kelvin_dual(dim, Exponent::Finite(p), alpha);
        let a = rellich_scan(&ProblemParams::new(dim, Exponent::Finite(p), alpha), 0, &scan_cutoff(), &spec).unwrap();
        let b = rellich_scan(&ProblemParams::new(dim, Exponent::Finite(p), dual), 0, &scan_cutoff(), &spec).unwrap();
        assert!((a.empirical_inf / b.empirical_inf - 1.0).abs() < 0.02);
    }
}

#[test]
fn even_and_odd_modes_follow_their_constants() {
    let spec = spec();
    let params = ProblemParams::new(3, Exponent::Finite(2.0), 0.0);
    let half = best_constant(&params.clone().with_domain(Domain::HalfSpace)).unwrap();
    for n in 0..=4u32 {
        let scan = rellich_scan(&params, n, &scan_cutoff(), &spec).unwrap();
        let whole = mode_constant(&params, n).unwrap().lower;
        assert!((scan.empirical_inf / whole - 1.0).abs() < 0.02);
        if n % 2 == 1 {
            assert!(scan.empirical_inf >= half.lower * 0.98, "odd mode {n} below the half-space bound");
        }
    }
}

#[test]
fn halfspace_quotients_respect_the_lower_bound() {
    let spec = spec();
    let params = ProblemParams::new(4, Exponent::Finite(3.0), 0.0);
    let lower = best_constant(&params.clone().with_domain(Domain::HalfSpace)).unwrap().lower;
    for f in sample_profiles(12, 3) {
        for n in [1u32, 3] {
            let r = halfspace_rellich_quotient(&params, HarmonicIndex::zonal(4, n), &f, &spec).unwrap();
            assert!(r.quotient >= lower);
            assert_eq!(r.verdict, Verdict::SatisfiesBound);
        }
    }
}

#[test]
fn critical_weight_holds_only_on_the_half_space() {
    let params = ProblemParams::new(3, Exponent::Finite(2.0), 1.5);
    assert_eq!(rellich_validity(&params, None).unwrap().modes(), vec![0]);
    let half = params.clone().with_domain(Domain::HalfSpace);
    assert!(rellich_validity(&half, None).unwrap().holds);
    let f = RadialProfile::plateau(-1.0, 1.0, 0.5);
    let r = halfspace_rellich_quotient(&params, HarmonicIndex::zonal(3, 1), &f, &spec()).unwrap();
    assert!(r.quotient > 0.0);
}

#[test]
fn planar_cz_quotients_grow_with_the_stretch() {
    let spec = spec();
    let phi = rellich::radial::Factor::Bump { start: 1.0, end: 2.0 };
    let q: Vec<f64> = [4.0, 8.0, 16.0, 32.0]
        .iter()
        .map(|&m| {
            let u = cz2_counterexample(m, 2.0, &phi).unwrap();
            cz_quotient_radial(2, Exponent::Finite(2.0), 1.0, &u, &spec).unwrap().quotient
        })
        .collect();
    assert!(q.windows(2).all(|w| w[1] > w[0]), "{q:?}");
    assert!(q[3] > 3.0 * q[0], "{q:?}");
}

#[test]
fn double_hardy_bound_holds_on_random_profiles() {
    let spec = spec();
    for f in sample_profiles(20, 11).iter().step_by(2) {
        for (dim, p, alpha) in [(3u32, 2.0, 0.0), (4, 3.0, 0.7), (5, 1.5, -0.4)] {
            let (lower, hess) = double_hardy_check(dim, p, alpha, f, &spec).unwrap();
            assert!(lower <= hess * (1.0 + 1e-9));
            let r = cz_quotient_radial(dim, Exponent::Finite(p), alpha, f, &spec).unwrap();
            assert_eq!(r.verdict, Verdict::Inconclusive);
        }
    }
}

#[test]
fn dissipativity_on_radial_and_odd_profiles() {
    let spec = spec();
    let real: Vec<RadialProfile> = sample_profiles(20, 5).into_iter().step_by(2).collect();
    let params = ProblemParams::new(3, Exponent::Finite(2.0), 0.0);
    for f in &real {
        let d = dissipativity_check(&params, f, 0, &spec).unwrap();
        assert_eq!(d.omega, -0.75);
        assert!(d.lhs >= d.rhs);
        assert!((d.lhs - d.identity_rhs).abs() <= 1e-8 * d.mass);
    }
    let half = ProblemParams::new(3, Exponent::Finite(3.0), 0.0).with_domain(Domain::HalfSpace);
    for f in &real {
        let d = dissipativity_check(&half, f, 1, &spec).unwrap();
        assert_eq!(d.omega, omega_p_plus(3, Exponent::Finite(3.0), 0.0));
        assert!(d.lhs >= d.rhs);
    }
    assert!(matches!(dissipativity_check(&half, &real[0], 2, &spec), Err(Error::EvenModeRejected { .. })));
}

#[test]
fn dissipativity_rate_is_sharp() {
    let spec = QuadratureSpec::with_tol(1e-12);
    let params = ProblemParams::new(5, Exponent::Finite(3.0), 0.0);
    let f = hardy_witness(0.001, 4000.0, 3.0, 3.0, 5).unwrap();
    let d = dissipativity_check(&params, &f, 0, &spec).unwrap();
    assert!((d.ratio() / d.omega - 1.0).abs() < 0.05, "{} vs {}", d.ratio(), d.omega);
}

#[test]
fn interpolation_constant_is_finite_and_stable() {
    let spec = spec();
    let small = interpolation_constant_estimate(0.0, Exponent::Finite(2.0), &sample_profiles(20, 9), 8, &spec).unwrap();
    let large = interpolation_constant_estimate(0.0, Exponent::Finite(2.0), &sample_profiles(40, 9), 8, &spec).unwrap();
    assert!(small.c_estimate.is_finite() && small.c_estimate > 0.0);
    assert!((large.c_estimate / small.c_estimate - 1.0).abs() <= 0.2, "{} vs {}", small.c_estimate, large.c_estimate);
    assert_eq!(small.eps_used.len(), 8);

    let plateau = RadialProfile::plateau(-1.0, 1.0, 0.5);
    let one = interpolation_constant_estimate(0.0, Exponent::Finite(2.0), &[plateau.clone()], 4, &spec).unwrap();
    assert!(one.c_estimate.is_finite());
    // first and second derivatives vanish on the flat part
    let [_, d1, d2] = plateau.rho_jet(1.0);
    assert_eq!((d1.norm(), d2.norm()), (0.0, 0.0));
}

#[test]
fn residual_ratio_shrinks_with_the_scale() {
    let spec = spec();
    let r: Vec<f64> = [2.0, 8.0, 32.0]
        .iter()
        .map(|&lk| {
            let c = CutoffFamily::from_log(lk, CutoffShape::Narrow).unwrap();
            spectral_residual_ratio(&c, -0.3, 4, Exponent::Finite(2.0), 0.5, &spec).unwrap()
        })
        .collect();
    assert!(r.windows(2).all(|w| w[1] < w[0]), "{r:?}");
}
