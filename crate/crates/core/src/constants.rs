//! Closed-form constants, spectral indices and validity predicates.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{Domain, Exponent, ModeSet, ProblemParams};
use crate::parabola::{dist_numeric, Parabola};
use crate::C64;

/// Equality tolerance for weights hitting an excluded value.
const WEIGHT_TOL: f64 = 1e-12;

/// Modes scanned at most when an automatic bound is needed.
const MODE_CAP: u32 = 1_000_000;

/// Vertex offset `γ` of the spectral parabola.
///
/// With `c = c₁ + ic₂` the imaginary part of the drift is absorbed by a real
/// shift of `ξ`, which moves `ic₂/2` into both factors.
pub fn gamma_p(params: &ProblemParams) -> C64 {
    let n = params.n();
    let (inv, conj) = (params.p.inv(), params.p.conj_inv());
    let half = C64::new(0.0, 0.5 * params.c.im);
    (n * inv - 2.0 + params.alpha + half) * (n * conj - params.alpha + params.c.re + half)
}

/// Coefficient of `iξ` along the parabola.
pub fn tilt(params: &ProblemParams) -> f64 {
    params.n() * (1.0 - 2.0 * params.p.inv()) + 2.0 - 2.0 * params.alpha + params.c.re
}

pub fn parabola(params: &ProblemParams) -> Parabola {
    Parabola::new(tilt(params), gamma_p(params))
}

/// Sharp exponential decay rate of the semigroup generated by `|x|²Δ + c x·∇`.
pub fn omega_p(dim: u32, p: Exponent, c: f64) -> f64 {
    let a = dim as f64 * p.inv();
    a * (dim as f64 - 2.0 + c) - a * a
}

/// Decay rate on the half-space with Dirichlet data.
pub fn omega_p_plus(dim: u32, p: Exponent, c: f64) -> f64 {
    let t = p.inv();
    omega_p(dim, p, c) + 4.0 * (dim as f64 - 1.0) * (t - t * t)
}

/// Laplace–Beltrami eigenvalue `n(n + N − 2)`.
pub fn lambda_n(dim: u32, n: u32) -> f64 {
    let n = n as f64;
    n * (n + dim as f64 - 2.0)
}

fn binomial(n: u64, k: u64) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Dimension of the space of spherical harmonics of order `n` on `S^{N−1}`.
pub fn harmonic_dim(dim: u32, n: u32) -> u128 {
    match n {
        0 => 1,
        1 => dim as u128,
        _ => {
            let (d, n) = (dim as u64, n as u64);
            binomial(d + n - 1, n) - binomial(d + n - 3, n - 2)
        }
    }
}

/// Weight dual to `alpha` under the Kelvin transform.
pub fn kelvin_dual(dim: u32, p: Exponent, alpha: f64) -> f64 {
    2.0 - alpha + dim as f64 * (1.0 - 2.0 * p.inv())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Reason {
    OnParabola,
    DegenerateHalfLine,
    ExcludedWeight,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Validity {
    pub holds: bool,
    pub violating_modes: Vec<(u32, Reason)>,
    pub checked_mode_bound: u32,
}

impl Validity {
    fn from_violations(violating_modes: Vec<(u32, Reason)>, checked_mode_bound: u32) -> Self {
        Validity { holds: violating_modes.is_empty(), violating_modes, checked_mode_bound }
    }

    pub fn modes(&self) -> Vec<u32> {
        self.violating_modes.iter().map(|v| v.0).collect()
    }
}

fn first_mode(params: &ProblemParams) -> u32 {
    match params.domain {
        Domain::HalfSpace => 1,
        _ => 0,
    }
}

/// Distance from `b + λ_n` to the parabola; values below this are "on" it.
fn membership_tol(params: &ProblemParams) -> f64 {
    1e-9 * (1.0 + params.b.norm())
}

/// Whether the inequality holds on the chosen domain and mode set.
///
/// For all modes the scan stops once `Re b + λ_n + Re γ > 0`: every point of
/// the parabola has real part at most `−Re γ`.
pub fn rellich_validity(params: &ProblemParams, n_max: Option<u32>) -> Result<Validity> {
    params.validate()?;
    let par = parabola(params);
    let g = par.gamma;
    let tol = membership_tol(params);
    let reason = if par.is_degenerate() { Reason::DegenerateHalfLine } else { Reason::OnParabola };
    let on = |n: u32| dist_numeric(params.b + lambda_n(params.dim, n), &par).distance < tol;
    match &params.modes {
        ModeSet::Finite(j) => {
            let bad = j.iter().filter(|&&n| on(n)).map(|&n| (n, reason)).collect();
            Ok(Validity::from_violations(bad, j.iter().copied().max().unwrap_or(0)))
        }
        ModeSet::All => {
            let mut bad = Vec::new();
            let mut n = first_mode(params);
            loop {
                if on(n) {
                    bad.push((n, reason));
                }
                let lam = lambda_n(params.dim, n);
                let cleared = params.b.re + lam + g.re > 0.0 && lam > params.b.norm() + g.norm() + 1.0;
                if cleared && n >= n_max.unwrap_or(0) {
                    return Ok(Validity::from_violations(bad, n));
                }
                if n >= MODE_CAP {
                    return Err(Error::NonConvergence("mode bound not certified".into()));
                }
                n += 1;
            }
        }
    }
}

/// Validity of the weighted Calderón–Zygmund estimate for `1 < p < ∞`.
///
/// Fails iff `α = N/p′ + n` with `n ≥ 0` or `α = 2 − N/p − n` with `n ≥ 2`.
/// In dimension two the first family with `n = 0` is the coincidence
/// `α = 2 − 2/p`, where the counterexample family applies.
pub fn cz_validity(dim: u32, p: f64, alpha: f64) -> Result<Validity> {
    if dim < 2 {
        return Err(Error::InvalidParams("N >= 2 required".into()));
    }
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::InvalidParams(format!("p = {p} outside (1, inf)")));
    }
    let n = dim as f64;
    let mut bad = Vec::new();
    let hit = |x: f64| x >= -WEIGHT_TOL && (x - x.round()).abs() < WEIGHT_TOL * (1.0 + x.abs());
    let up = alpha - n * (1.0 - 1.0 / p);
    if hit(up) {
        bad.push((up.round() as u32, Reason::ExcludedWeight));
    }
    let down = 2.0 - n / p - alpha;
    if hit(down) && down.round() >= 2.0 {
        bad.push((down.round() as u32, Reason::ExcludedWeight));
    }
    let bound = bad.iter().map(|b| b.0).max().unwrap_or(0);
    Ok(Validity::from_violations(bad, bound))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    /// `N/p′ + n`
    Upper,
    /// `2 − N/p − n`
    Lower,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExcludedAlpha {
    pub alpha: f64,
    pub n: u32,
    pub family: Family,
}

/// Weights at which the radial-plus-spherical inequality fails for some mode
/// `0 ≤ n ≤ n_range` (with `b = c = 0`), sorted and without duplicates.
pub fn excluded_alphas(dim: u32, p: Exponent, n_range: u32) -> Vec<ExcludedAlpha> {
    let nd = dim as f64;
    let mut out: Vec<ExcludedAlpha> = (0..=n_range)
        .flat_map(|n| {
            [
                ExcludedAlpha { alpha: nd * p.conj_inv() + n as f64, n, family: Family::Upper },
                ExcludedAlpha { alpha: 2.0 - nd * p.inv() - n as f64, n, family: Family::Lower },
            ]
        })
        .collect();
    out.sort_by(|a, b| a.alpha.total_cmp(&b.alpha));
    out.dedup_by(|a, b| (a.alpha - b.alpha).abs() < WEIGHT_TOL);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EstimateKind {
    Exact,
    Interval,
    UpperOnly,
}

/// Which closed form produced an estimate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    /// Minimum of the two-branch `L²` mode constants.
    TwoBranchL2,
    /// `b + γ` when positive.
    PositiveShift,
    /// `Re(b + γ)` for complex coefficients with real `b + γ`.
    ComplexShift,
    /// `|b + λ_n + γ|` on a single mode.
    SingleMode,
    /// Upper end of the subspace sandwich; the multiplier is unknown.
    SubspaceSandwich,
    /// Half-space bracket from the two Hardy inequalities.
    HalfSpaceSandwich,
    /// Distance from `b + λ_n` to the parabola, minimised over modes.
    SpectralDistance,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConstantEstimate {
    pub kind: EstimateKind,
    pub value: Option<f64>,
    pub lower: f64,
    pub upper: f64,
    pub source: Source,
}

impl ConstantEstimate {
    pub fn exact(value: f64, source: Source) -> Self {
        ConstantEstimate { kind: EstimateKind::Exact, value: Some(value), lower: value, upper: value, source }
    }

    pub fn interval(lower: f64, upper: f64, source: Source) -> Self {
        ConstantEstimate { kind: EstimateKind::Interval, value: None, lower, upper, source }
    }

    pub fn upper_only(upper: f64, source: Source) -> Self {
        ConstantEstimate { kind: EstimateKind::UpperOnly, value: None, lower: 0.0, upper, source }
    }

    /// Certified positive lower bound, if any.
    pub fn lower_bound(&self) -> Option<f64> {
        match self.kind {
            EstimateKind::UpperOnly => None,
            _ if self.lower > 0.0 => Some(self.lower),
            _ => None,
        }
    }
}

/// Two-branch `L²` constant of mode `n` (real coefficients).
pub fn l2_mode_constant(params: &ProblemParams, n: u32) -> f64 {
    let nd = params.n();
    let (b, c) = (params.b.re, params.c.re);
    let lam = lambda_n(params.dim, n);
    let u = nd / 2.0 - 1.0 + c / 2.0;
    let kappa = 1.0 - params.alpha + c / 2.0;
    let test = b + lam + u * u + kappa * kappa;
    if test >= 0.0 {
        (b + lam + u * u - kappa * kappa).abs()
    } else {
        2.0 * kappa.abs() * (-b - u * u - lam).sqrt()
    }
}

/// Best constant of `‖|x|^α L u‖_p ≥ C ‖|x|^{α−2} u‖_p` as a norm ratio.
pub fn best_constant(params: &ProblemParams) -> Result<ConstantEstimate> {
    let validity = rellich_validity(params, None)?;
    if !validity.holds {
        return Err(Error::InvalidInequality { modes: validity.modes() });
    }
    let g = gamma_p(params);
    let shift = params.b + g;
    let real = params.has_real_coefficients();
    let nd = params.n();
    let t = params.p.inv();

    if params.domain == Domain::HalfSpace && real && params.modes == ModeSet::All {
        let lower = shift.re + 4.0 * (nd - 1.0) * (t - t * t);
        if lower > 0.0 {
            return Ok(ConstantEstimate::interval(lower, shift.re + nd - 1.0, Source::HalfSpaceSandwich));
        }
    }

    if params.p.is_two() && real {
        let best = match &params.modes {
            ModeSet::Finite(j) => j.iter().map(|&n| l2_mode_constant(params, n)).fold(f64::INFINITY, f64::min),
            ModeSet::All => {
                let u = nd / 2.0 - 1.0 + params.c.re / 2.0;
                let kappa = 1.0 - params.alpha + params.c.re / 2.0;
                let mut best = f64::INFINITY;
                let mut n = first_mode(params);
                loop {
                    let v = l2_mode_constant(params, n);
                    best = best.min(v);
                    let lam = lambda_n(params.dim, n);
                    let w = params.b.re + lam + u * u - kappa * kappa;
                    let positive = params.b.re + lam + u * u + kappa * kappa >= 0.0;
                    if positive && w >= 0.0 && w >= best {
                        break;
                    }
                    if n >= MODE_CAP {
                        return Err(Error::NonConvergence("mode scan did not settle".into()));
                    }
                    n += 1;
                }
                best
            }
        };
        return Ok(ConstantEstimate::exact(best, Source::TwoBranchL2));
    }

    let whole_all = params.domain == Domain::WholeSpace && params.modes == ModeSet::All;
    if whole_all && real && shift.re > 0.0 {
        return Ok(ConstantEstimate::exact(shift.re, Source::PositiveShift));
    }
    if whole_all && !real && shift.im.abs() <= 1e-14 * (1.0 + shift.norm()) && shift.re > 0.0 {
        return Ok(ConstantEstimate::exact(shift.re, Source::ComplexShift));
    }

    if let ModeSet::Finite(j) = &params.modes {
        if real && j.len() == 1 {
            let n = j[0];
            let half_drift = (nd - 2.0 + params.c.re) / 2.0;
            let lam = lambda_n(params.dim, n);
            if params.b.re + lam + half_drift * half_drift >= 0.0 {
                return Ok(ConstantEstimate::exact((params.b.re + lam + g.re).abs(), Source::SingleMode));
            }
        }
        if real {
            // γ is concave in 1/p, so positivity at both endpoints and at p covers every p
            let lam = lambda_n(params.dim, j[0]);
            let at = |q: Exponent| params.b.re + lam + gamma_p(&ProblemParams { p: q, ..params.clone() }).re;
            let all_positive = [Exponent::Finite(1.0), Exponent::Infinite, params.p]
                .into_iter()
                .all(|q| at(q) > 0.0);
            if all_positive {
                return Ok(ConstantEstimate::upper_only(at(params.p), Source::SubspaceSandwich));
            }
        }
    }

    Ok(ConstantEstimate::upper_only(min_spectral_distance(params)?, Source::SpectralDistance))
}

/// `min_n dist(b + λ_n, P)` over the mode set.
pub fn min_spectral_distance(params: &ProblemParams) -> Result<f64> {
    let par = parabola(params);
    let d = |n: u32| dist_numeric(params.b + lambda_n(params.dim, n), &par).distance;
    match &params.modes {
        ModeSet::Finite(j) => Ok(j.iter().map(|&n| d(n)).fold(f64::INFINITY, f64::min)),
        ModeSet::All => {
            let mut best = f64::INFINITY;
            let mut n = first_mode(params);
            loop {
                best = best.min(d(n));
                // distance is at least the gap between real parts
                if params.b.re + lambda_n(params.dim, n) + par.gamma.re >= best {
                    return Ok(best);
                }
                if n >= MODE_CAP {
                    return Err(Error::NonConvergence("mode scan did not settle".into()));
                }
                n += 1;
            }
        }
    }
}

/// Best constant restricted to the single mode `n`.
pub fn mode_constant(params: &ProblemParams, n: u32) -> Result<ConstantEstimate> {
    let single = ProblemParams { modes: ModeSet::single(n), ..params.clone() };
    let single = if single.domain == Domain::HalfSpace {
        ProblemParams { domain: Domain::WholeSpace, ..single }
    } else {
        single
    };
    best_constant(&single)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Feller {
    pub w: f64,
    pub q: f64,
    pub r: f64,
    pub classification: String,
}

/// Scale density and the two boundary integrals of the radial diffusion
/// `ρ²D² + (N − 1 + c)ρD`, normalised at `ρ = 1`.
pub fn feller_quantities(dim: u32, c: f64, rho: f64) -> Result<Feller> {
    if !(rho > 0.0) {
        return Err(Error::Domain(format!("ρ = {rho} must be positive")));
    }
    let a = dim as f64 - 2.0 + c;
    let w = rho.powf(-(dim as f64 - 1.0 + c));
    let (q, r) = if a.abs() < 1e-14 {
        let v = rho.ln() / rho;
        (v, v)
    } else {
        ((1.0 / rho - rho.powf(a - 1.0)) / -a, (1.0 / rho - rho.powf(-a - 1.0)) / a)
    };
    Ok(Feller { w, q, r, classification: "natural at 0 and ∞".into() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn real(dim: u32, p: f64, alpha: f64) -> ProblemParams {
        ProblemParams::new(dim, Exponent::new(p).unwrap(), alpha)
    }

    #[test]
    fn gamma_examples() {
        assert_relative_eq!(gamma_p(&real(5, 2.0, 0.0)).re, 1.25);
        assert_eq!(gamma_p(&real(4, 2.0, 0.0)).re, 0.0);
        let g = gamma_p(&real(6, 2.0, 1.0)).re;
        assert_relative_eq!(g, 4.0);
        assert_relative_eq!(g, (6.0f64 / 2.0 - 1.0).powi(2) - 0.0);
    }

    #[test]
    fn gamma_endpoints() {
        let inf = ProblemParams::new(3, Exponent::Infinite, 0.5);
        assert_relative_eq!(gamma_p(&inf).re, (-2.0 + 0.5) * (3.0 - 0.5));
        let one = real(3, 1.0, 0.5);
        assert_relative_eq!(gamma_p(&one).re, (3.0 - 2.0 + 0.5) * (-0.5));
    }

    #[test]
    fn omega_examples() {
        let c = 0.7;
        assert_relative_eq!(omega_p(4, Exponent::Finite(1.0), c), 4.0 * (c - 2.0), max_relative = 1e-14);
        assert_eq!(omega_p(4, Exponent::Infinite, c), 0.0);
        let pbar = 2.0 * 4.0 / (4.0 - 2.0 + c);
        assert_relative_eq!(omega_p(4, Exponent::Finite(pbar), c), ((4.0 - 2.0 + c) / 2.0f64).powi(2), max_relative = 1e-14);
        assert_relative_eq!(omega_p_plus(3, Exponent::Finite(2.0), 0.0), 1.25);
        assert_eq!(omega_p_plus(3, Exponent::Finite(1.0), c), omega_p(3, Exponent::Finite(1.0), c));
        assert_eq!(omega_p_plus(3, Exponent::Infinite, c), 0.0);
    }

    #[test]
    fn harmonic_dimensions() {
        for dim in 2..8 {
            assert_eq!(harmonic_dim(dim, 0), 1);
            assert_eq!(harmonic_dim(dim, 1), dim as u128);
        }
        for n in 2..=6 {
            assert_eq!(harmonic_dim(3, n), 2 * n as u128 + 1);
            assert_eq!(harmonic_dim(2, n), 2);
        }
        assert_eq!(lambda_n(3, 2), 6.0);
        assert_eq!(lambda_n(7, 1), 6.0);
    }

    #[test]
    fn validity_examples() {
        let v = rellich_validity(&real(4, 2.0, 0.0), None).unwrap();
        assert!(!v.holds);
        assert_eq!(v.modes(), vec![0]);
        assert!(rellich_validity(&real(5, 2.0, 0.0), None).unwrap().holds);
        let v = rellich_validity(&real(3, 1.5, 0.0), None).unwrap();
        assert_eq!(v.modes(), vec![0]);
    }

    #[test]
    fn cz_examples() {
        assert!(cz_validity(3, 3.0, 1.0).unwrap().holds);
        assert!(!cz_validity(3, 3.0, 2.0).unwrap().holds);
        for p in [1.5, 2.0, 4.0] {
            assert!(!cz_validity(2, p, 2.0 - 2.0 / p).unwrap().holds);
        }
        // second family only from n = 2
        assert!(cz_validity(3, 3.0, 0.0).unwrap().holds);
        assert!(!cz_validity(3, 3.0, -1.0).unwrap().holds);
    }

    #[test]
    fn constant_examples() {
        let c = best_constant(&real(5, 2.0, 0.0)).unwrap();
        assert_eq!(c.kind, EstimateKind::Exact);
        assert_relative_eq!(c.value.unwrap(), 1.25, max_relative = 1e-15);
        for (n, p) in [(5u32, 2.0), (7, 3.0), (10, 2.5), (6, 1.2)] {
            let c = best_constant(&real(n, p, 0.0)).unwrap();
            let nd = n as f64;
            assert_relative_eq!(c.value.unwrap(), (nd / p - 2.0) * (nd * (1.0 - 1.0 / p)), max_relative = 1e-13);
        }
        let neg = real(4, 2.0, 0.0).with_b(C64::new(-4.0, 0.0)).with_modes(ModeSet::single(0));
        let c = best_constant(&neg).unwrap();
        assert_relative_eq!(c.value.unwrap().powi(2), 12.0, max_relative = 1e-13);
        let half = real(3, 2.0, 0.0).with_domain(Domain::HalfSpace);
        let c = best_constant(&half).unwrap();
        assert_eq!(c.kind, EstimateKind::Interval);
        // γ₂ = −3/4, bracket ends both at γ₂ + N − 1
        assert_relative_eq!(c.lower, 1.25, max_relative = 1e-14);
        assert_relative_eq!(c.lower, c.upper, max_relative = 1e-14);
    }

    #[test]
    fn invalid_inequality_is_rejected() {
        assert!(matches!(best_constant(&real(4, 2.0, 0.0)), Err(Error::InvalidInequality { .. })));
    }

    #[test]
    fn kelvin_examples() {
        assert_eq!(kelvin_dual(5, Exponent::Finite(2.0), 0.3), 1.7);
        assert_eq!(kelvin_dual(3, Exponent::Finite(3.0), 0.0), 3.0);
        let p = Exponent::Finite(3.0);
        let fixed = 1.0 + 4.0 * (0.5 - 1.0 / 3.0);
        assert_relative_eq!(kelvin_dual(4, p, fixed), fixed, max_relative = 1e-14);
    }

    #[test]
    fn excluded_weights() {
        let got: Vec<f64> = excluded_alphas(3, Exponent::Finite(3.0), 2).iter().map(|e| e.alpha).collect();
        let want = [-1.0, 0.0, 1.0, 2.0, 3.0, 4.0];
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() < 1e-12);
        }
        let zero_excluded = |p: Exponent| excluded_alphas(4, p, 4).iter().any(|e| e.alpha.abs() < 1e-12);
        for p in [1.0, 2.0, 4.0] {
            assert!(zero_excluded(Exponent::Finite(p)));
        }
        assert!(zero_excluded(Exponent::Infinite));
        for p in [1.5, 3.0, 5.0] {
            assert!(!zero_excluded(Exponent::Finite(p)));
        }
    }

    #[test]
    fn feller_examples() {
        let f = feller_quantities(3, 0.0, 1.0).unwrap();
        assert_eq!((f.w, f.q, f.r), (1.0, 0.0, 0.0));
        let rho = 3.7;
        let f = feller_quantities(5, -3.0, rho).unwrap();
        assert_relative_eq!(f.q, rho.ln() / rho);
        assert_relative_eq!(f.r, rho.ln() / rho);
        assert_eq!(f.classification, "natural at 0 and ∞");
    }
}
