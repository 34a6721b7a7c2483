//! Frozen values checked against oracles that share no code path with the
//! routines under test: dense grid minimisation, closed-form moments and
//! direct quadrature of elementary integrands.

use approx::assert_relative_eq;
use rellich::constants::{l2_mode_constant, mode_constant, parabola};
use rellich::radial::{hardy_lhs_rhs_radial, halfspace_hardy_quadrature};
use rellich::verifier::rellich_scan;
use rellich::witness::{halfspace_hardy_witness, hardy_witness, CutoffFamily, CutoffShape};
use rellich::*;

/// `min_ξ |z − (−ξ² + i s ξ − γ)|` on a uniform grid refined three times.
fn grid_distance(z: C64, tilt: f64, gamma: C64) -> f64 {
    let point = |xi: f64| C64::new(-xi * xi, tilt * xi) - gamma;
    let (mut lo, mut hi) = (-40.0, 40.0);
    let mut best = (f64::INFINITY, 0.0);
    for _ in 0..4 {
        let steps = 20_000;
        for i in 0..=steps {
            let xi = lo + (hi - lo) * i as f64 / steps as f64;
            let d = (z - point(xi)).norm();
            if d < best.0 {
                best = (d, xi);
            }
        }
        let w = (hi - lo) / steps as f64;
        lo = best.1 - 2.0 * w;
        hi = best.1 + 2.0 * w;
    }
    best.0
}

#[test]
fn negative_branch_constant_matches_grid_distance() {
    // N = 4, α = 0, b = −4 on the radial mode: squared constant 4·1·(4 − 1)
    let params = ProblemParams::new(4, Exponent::Finite(2.0), 0.0).with_b(C64::new(-4.0, 0.0));
    let c = l2_mode_constant(&params, 0);
    assert_relative_eq!(c * c, 12.0, max_relative = 1e-12);
    let par = parabola(&params);
    assert_relative_eq!(grid_distance(params.b, par.tilt, par.gamma), c, max_relative = 1e-9);
    let est = mode_constant(&params, 0).unwrap();
    assert_eq!(est.kind, EstimateKind::Exact);
    assert_relative_eq!(est.value.unwrap(), 12f64.sqrt(), max_relative = 1e-12);
}

#[test]
fn negative_branch_scan_reaches_the_constant() {
    let params = ProblemParams::new(4, Exponent::Finite(2.0), 0.0).with_b(C64::new(-4.0, 0.0));
    let cutoff = CutoffFamily::from_log(50.0, CutoffShape::Stretched).unwrap();
    let scan = rellich_scan(&params, 0, &cutoff, &QuadratureSpec::default()).unwrap();
    assert!((scan.empirical_inf_power / 12.0 - 1.0).abs() < 0.02, "{}", scan.empirical_inf_power);
    assert!(scan.argmin.abs() > 1.0, "minimiser leaves the vertex on the negative branch");
}

#[test]
fn two_branch_constants_match_grid_distance() {
    for &(dim, alpha, b, c, n) in &[
        (3u32, 0.0, 0.0, 0.0, 0u32),
        (5, 1.3, -12.0, 0.4, 1),
        (2, -0.7, 2.5, -1.0, 3),
        (6, 2.2, -30.0, 0.0, 0),
        (4, 0.5, -3.0, 1.2, 2),
    ] {
        let params = ProblemParams::new(dim, Exponent::Finite(2.0), alpha)
            .with_b(C64::new(b, 0.0))
            .with_c(C64::new(c, 0.0));
        let par = parabola(&params);
        let z = params.b + lambda_n(dim, n);
        assert_relative_eq!(
            l2_mode_constant(&params, n),
            grid_distance(z, par.tilt, par.gamma),
            epsilon = 1e-9,
            max_relative = 1e-9
        );
    }
}

#[test]
fn complex_drift_distance_matches_grid() {
    let params = ProblemParams::new(3, Exponent::Finite(3.0), 0.4)
        .with_b(C64::new(-1.0, 0.7))
        .with_c(C64::new(0.3, 0.9));
    let par = parabola(&params);
    for n in 0..4 {
        let z = params.b + lambda_n(3, n);
        assert_relative_eq!(
            dist_numeric(z, &par).distance,
            grid_distance(z, par.tilt, par.gamma),
            epsilon = 1e-9
        );
    }
}

#[test]
fn hardy_witness_at_p2_follows_the_gamma_moment() {
    // under ρ ~ Gamma(2ε) the quotient is E[(a − ρ/2)²] with a − ε the Hardy exponent
    let spec = QuadratureSpec::with_tol(1e-12);
    for &(dim, beta, eps) in &[(3u32, 0.0, 0.01), (5, 1.0, 0.05), (4, -1.5, 0.02)] {
        let f = hardy_witness(eps, 4096.0, beta, 2.0, dim).unwrap();
        let q = hardy_lhs_rhs_radial(&f, beta, 2.0, dim, &spec).unwrap().quotient();
        let centre = (beta - 2.0 + dim as f64) / 2.0;
        assert_relative_eq!(q, centre * centre + eps / 2.0, max_relative = 1e-9);
    }
}

#[test]
fn halfspace_hardy_stays_above_the_constant() {
    let spec = QuadratureSpec::with_tol(1e-7);
    for p in [2.0, 3.0] {
        let target = (1.0 / p) * (1.0 / p) + 8.0 / (p * p);
        let w = halfspace_hardy_witness(0.05, 32.0, 0.0, p, 3).unwrap();
        let q = halfspace_hardy_quadrature(&w, 0.0, p, 3, &spec).unwrap().quotient();
        assert!(q >= target, "p = {p}: {q} < {target}");
    }
}

#[test]
fn feller_scale_integral_diverges_logarithmically() {
    // c = 2 − N: Q(ρ) = log ρ / ρ, so ∫₁^T Q = (log T)²/2
    let dim = 3;
    let c = 2.0 - dim as f64;
    let spec = QuadratureSpec::default();
    for t in [10.0f64, 1e3, 1e6] {
        let integral = rellich::quadrature::integrate(
            |s: f64| {
                let rho = s.exp();
                feller_quantities(dim, c, rho).unwrap().q * rho
            },
            0.0,
            t.ln(),
            &[],
            &spec,
        )
        .unwrap()
        .value;
        assert_relative_eq!(integral, 0.5 * t.ln().powi(2), max_relative = 1e-9);
    }
}
