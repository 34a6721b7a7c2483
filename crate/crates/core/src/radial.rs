//! Radial profiles with closed-form derivatives and weighted quadrature in
//! the logarithmic variable `s = log ρ`.
//!
//! A profile is `w(s) = e^{zs} g(s)` where `z` is a complex leading exponent
//! and `g` is built from smooth cutoffs, exponentials and products. Every
//! weighted integral is evaluated from `ln |w|`, so profiles whose values
//! overflow `f64` (large plateaus, `p` in the thousands) stay representable.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::constants::omega_p;
use crate::error::{Error, Result};
use crate::params::Exponent;
use crate::quadrature::{integrate, integrate_log, sup_log, QuadratureSpec};
use crate::special::{bump_jet, smoothstep_jet};
use crate::C64;

type Jet = [C64; 3];

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// `ln` of the largest `|a|·e^s` kept before `exp(a e^s)` counts as zero.
const EXP_RHO_CUTOFF: f64 = 750.0;

/// Body of a profile as a function of `s`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Factor {
    Const(C64),
    /// `e^{rate·s}`
    Exp { rate: C64 },
    /// `exp(a·e^s) = exp(aρ)`
    ExpRho { a: f64 },
    /// Smoothstep from 0 at `start` to 1 at `end`.
    Rise { start: f64, end: f64 },
    /// Smoothstep from 1 at `start` to 0 at `end`.
    Fall { start: f64, end: f64 },
    /// Bump supported on `[start, end]`.
    Bump { start: f64, end: f64 },
    Product(Vec<Factor>),
    Sum(Vec<Factor>),
}

fn real_jet(v: (f64, f64, f64), k: f64) -> Jet {
    [C64::new(v.0, 0.0), C64::new(v.1 * k, 0.0), C64::new(v.2 * k * k, 0.0)]
}

/// Maps `[start, end]` onto `[−1, 1]`.
fn unit(s: f64, start: f64, end: f64) -> (f64, f64) {
    let k = 2.0 / (end - start);
    (-1.0 + k * (s - start), k)
}

impl Factor {
    pub fn jet(&self, s: f64) -> Jet {
        match self {
            Factor::Const(c) => [*c, ZERO, ZERO],
            Factor::Exp { rate } => {
                let e = (rate * s).exp();
                [e, rate * e, rate * rate * e]
            }
            Factor::ExpRho { a } => {
                let x = a * s.exp();
                let e = x.exp();
                if e == 0.0 {
                    return [ZERO; 3];
                }
                real_jet((e, x * e, (x + x * x) * e), 1.0)
            }
            Factor::Rise { start, end } => {
                let (t, k) = unit(s, *start, *end);
                real_jet(smoothstep_jet(t), k)
            }
            Factor::Fall { start, end } => {
                let (t, k) = unit(s, *start, *end);
                let (v, d1, d2) = smoothstep_jet(t);
                real_jet((1.0 - v, -d1, -d2), k)
            }
            Factor::Bump { start, end } => {
                let (t, k) = unit(s, *start, *end);
                real_jet(bump_jet(t), k)
            }
            Factor::Product(fs) => {
                let mut acc = [ONE, ZERO, ZERO];
                for f in fs {
                    let b = f.jet(s);
                    acc = [
                        acc[0] * b[0],
                        acc[1] * b[0] + acc[0] * b[1],
                        acc[2] * b[0] + 2.0 * acc[1] * b[1] + acc[0] * b[2],
                    ];
                    if acc.iter().all(|v| *v == ZERO) {
                        break;
                    }
                }
                acc
            }
            Factor::Sum(fs) => fs.iter().fold([ZERO; 3], |acc, f| {
                let b = f.jet(s);
                [acc[0] + b[0], acc[1] + b[1], acc[2] + b[2]]
            }),
        }
    }

    /// Interval in `s` outside which the factor vanishes (or is negligible).
    pub fn support(&self) -> (f64, f64) {
        let all = (f64::NEG_INFINITY, f64::INFINITY);
        match self {
            Factor::Const(c) if *c == ZERO => (0.0, 0.0),
            Factor::Const(_) | Factor::Exp { .. } => all,
            Factor::ExpRho { a } if *a < 0.0 => (f64::NEG_INFINITY, (EXP_RHO_CUTOFF / -a).ln()),
            Factor::ExpRho { .. } => all,
            Factor::Rise { start, .. } => (*start, f64::INFINITY),
            Factor::Fall { end, .. } => (f64::NEG_INFINITY, *end),
            Factor::Bump { start, end } => (*start, *end),
            Factor::Product(fs) => fs.iter().fold(all, |(lo, hi), f| {
                let (a, b) = f.support();
                (lo.max(a), hi.min(b))
            }),
            Factor::Sum(fs) => fs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), f| {
                let (a, b) = f.support();
                (lo.min(a), hi.max(b))
            }),
        }
    }

    /// Points where the factor is not analytic.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Factor::Rise { start, end } | Factor::Fall { start, end } | Factor::Bump { start, end } => {
                vec![*start, 0.5 * (start + end), *end]
            }
            Factor::Product(fs) | Factor::Sum(fs) => fs.iter().flat_map(Factor::breakpoints).collect(),
            _ => Vec::new(),
        }
    }

    /// `g(s + shift)`.
    fn translated(&self, shift: f64) -> Factor {
        match self {
            Factor::Const(c) => Factor::Const(*c),
            Factor::Exp { rate } => Factor::Product(vec![Factor::Const((rate * shift).exp()), Factor::Exp { rate: *rate }]),
            Factor::ExpRho { a } => Factor::ExpRho { a: a * shift.exp() },
            Factor::Rise { start, end } => Factor::Rise { start: start - shift, end: end - shift },
            Factor::Fall { start, end } => Factor::Fall { start: start - shift, end: end - shift },
            Factor::Bump { start, end } => Factor::Bump { start: start - shift, end: end - shift },
            Factor::Product(fs) => Factor::Product(fs.iter().map(|f| f.translated(shift)).collect()),
            Factor::Sum(fs) => Factor::Sum(fs.iter().map(|f| f.translated(shift)).collect()),
        }
    }
}

/// `f(ρ) = ρ^z g(log ρ)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadialProfile {
    #[serde(serialize_with = "ser_c64")]
    pub exponent: C64,
    pub body: Factor,
}

fn ser_c64<S: serde::Serializer>(z: &C64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

impl RadialProfile {
    pub fn new(exponent: C64, body: Factor) -> Self {
        RadialProfile { exponent, body }
    }

    /// Smooth plateau equal to 1 on `[a, b]` with transitions of width `t`.
    pub fn plateau(a: f64, b: f64, t: f64) -> Self {
        RadialProfile::new(
            ZERO,
            Factor::Product(vec![Factor::Rise { start: a - t, end: a }, Factor::Fall { start: b, end: b + t }]),
        )
    }

    pub fn zero() -> Self {
        RadialProfile::new(ZERO, Factor::Const(ZERO))
    }

    pub fn scaled(&self, c: C64) -> Self {
        RadialProfile::new(self.exponent, Factor::Product(vec![Factor::Const(c), self.body.clone()]))
    }

    /// `ρ^a f(ρ)`.
    pub fn times_power(&self, a: C64) -> Self {
        RadialProfile::new(self.exponent + a, self.body.clone())
    }

    /// `ρ ↦ f(λρ)`.
    pub fn dilate(&self, lambda: f64) -> Self {
        let shift = lambda.ln();
        let body = Factor::Product(vec![Factor::Const((self.exponent * shift).exp()), self.body.translated(shift)]);
        RadialProfile::new(self.exponent, body)
    }

    /// `(g, g′ + zg, g″ + 2zg′ + z²g)`: the `s`-jet of `w` divided by `e^{zs}`.
    pub fn reduced_jet(&self, s: f64) -> Jet {
        let z = self.exponent;
        let [g0, g1, g2] = self.body.jet(s);
        [g0, g1 + z * g0, g2 + 2.0 * z * g1 + z * z * g0]
    }

    /// `(w, w_s, w_ss)` at `s`.
    pub fn s_jet(&self, s: f64) -> Jet {
        let e = (self.exponent * s).exp();
        self.reduced_jet(s).map(|v| v * e)
    }

    /// `(f, f′, f″)` in `ρ`.
    pub fn rho_jet(&self, rho: f64) -> Jet {
        let [w, ws, wss] = self.s_jet(rho.ln());
        [w, ws / rho, (wss - ws) / (rho * rho)]
    }

    pub fn value(&self, rho: f64) -> C64 {
        self.rho_jet(rho)[0]
    }

    /// `ln |f(e^s)|`.
    pub fn ln_abs(&self, s: f64) -> f64 {
        self.exponent.re * s + self.body.jet(s)[0].norm().ln()
    }

    /// `ln |f′(e^s)|`.
    pub fn ln_abs_d1(&self, s: f64) -> f64 {
        (self.exponent.re - 1.0) * s + self.reduced_jet(s)[1].norm().ln()
    }

    pub fn support(&self) -> (f64, f64) {
        self.body.support()
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        self.body.breakpoints()
    }

    fn bounded_support(&self) -> Result<(f64, f64)> {
        let (lo, hi) = self.support();
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::Domain("profile support must be bounded in log ρ".into()));
        }
        Ok((lo, hi))
    }
}

/// A norm stored through its logarithm.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Norm {
    pub ln: f64,
    pub rel_error: f64,
    pub evaluations: usize,
}

impl Norm {
    pub fn value(&self) -> f64 {
        self.ln.exp()
    }
}

/// `(∫ e^{(we+N)s} e^{p·h(s)} ds)^{1/p}`, or `sup e^{we·s + h(s)}` when
/// `p = ∞`, where `h = ln |f|` in the variable `s`.
pub fn log_weighted_norm<H: Fn(f64) -> f64>(
    h: H,
    weight_exponent: f64,
    dim: u32,
    p: Exponent,
    range: (f64, f64),
    breakpoints: &[f64],
    spec: &QuadratureSpec,
) -> Result<Norm> {
    let (lo, hi) = range;
    if !(hi > lo) {
        return Ok(Norm { ln: f64::NEG_INFINITY, rel_error: 0.0, evaluations: 0 });
    }
    match p {
        Exponent::Infinite => Ok(Norm {
            ln: sup_log(|s| weight_exponent * s + h(s), lo, hi, breakpoints),
            rel_error: 0.0,
            evaluations: 8000,
        }),
        Exponent::Finite(p) => {
            let w = weight_exponent + dim as f64;
            let r = integrate_log(|s| w * s + p * h(s), lo, hi, breakpoints, spec)?;
            Ok(Norm { ln: r.ln_value / p, rel_error: r.rel_error / p, evaluations: r.evaluations })
        }
    }
}

/// `‖ρ^{we/p} f‖` in `L^p(ρ^{N−1}dρ)`; at `p = ∞` the weight multiplies as `ρ^{we}`.
pub fn weighted_pnorm(f: &RadialProfile, weight_exponent: f64, p: Exponent, dim: u32, spec: &QuadratureSpec) -> Result<Norm> {
    let range = f.bounded_support()?;
    log_weighted_norm(|s| f.ln_abs(s), weight_exponent, dim, p, range, &f.breakpoints(), spec)
}

/// `f″ + (N − 1 + c) f′/ρ − shift·f/ρ²` for a profile `f`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RellichOperand {
    pub profile: RadialProfile,
    pub dim: u32,
    #[serde(serialize_with = "ser_c64")]
    pub c: C64,
    #[serde(serialize_with = "ser_c64")]
    pub shift: C64,
}

pub fn apply_radial_rellich_operand(f: &RadialProfile, dim: u32, c: C64, shift: C64) -> RellichOperand {
    RellichOperand { profile: f.clone(), dim, c, shift }
}

impl RellichOperand {
    /// `w_ss + (N − 2 + c) w_s − shift·w` divided by `e^{zs}`.
    fn reduced(&self, s: f64) -> C64 {
        let [w, ws, wss] = self.profile.reduced_jet(s);
        wss + (self.dim as f64 - 2.0 + self.c) * ws - self.shift * w
    }

    pub fn value(&self, rho: f64) -> C64 {
        let s = rho.ln();
        self.reduced(s) * (self.profile.exponent * s).exp() / (rho * rho)
    }

    /// `ln |operand(e^s)|`.
    pub fn ln_abs(&self, s: f64) -> f64 {
        (self.profile.exponent.re - 2.0) * s + self.reduced(s).norm().ln()
    }

    pub fn weighted_pnorm(&self, weight_exponent: f64, p: Exponent, spec: &QuadratureSpec) -> Result<Norm> {
        let range = self.profile.bounded_support()?;
        log_weighted_norm(|s| self.ln_abs(s), weight_exponent, self.dim, p, range, &self.profile.breakpoints(), spec)
    }
}

/// `√(|f″|² + (N − 1)|f′/ρ|²)`, the Hessian norm of a radial function.
pub fn radial_hessian_frobenius(f: &RadialProfile, rho: f64, dim: u32) -> f64 {
    let [_, d1, d2] = f.rho_jet(rho);
    (d2.norm_sqr() + (dim as f64 - 1.0) * (d1 / rho).norm_sqr()).sqrt()
}

/// `ln` of the radial Hessian norm at `ρ = e^s`, from the reduced jet.
pub fn ln_hessian(f: &RadialProfile, s: f64, dim: u32) -> f64 {
    let [_, ws, wss] = f.reduced_jet(s);
    let sq = (wss - ws).norm_sqr() + (dim as f64 - 1.0) * ws.norm_sqr();
    (f.exponent.re - 2.0) * s + 0.5 * sq.ln()
}

/// `ln |Δf|` at `ρ = e^s`.
pub fn ln_laplacian(f: &RadialProfile, s: f64, dim: u32) -> f64 {
    let [_, ws, wss] = f.reduced_jet(s);
    (f.exponent.re - 2.0) * s + (wss + (dim as f64 - 2.0) * ws).norm().ln()
}

/// Pullback `w(s) = e^{sN/p} f(e^s)` with the coefficients of the induced
/// operator `w″ + drift·w′ + zero_order·w` for `ρ²D² + (N − 1 + c)ρD`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmdenFowler {
    /// Profile read as a function of `s` instead of `ρ`.
    pub w: RadialProfile,
    pub drift: f64,
    pub zero_order: f64,
}

pub fn emden_fowler(f: &RadialProfile, dim: u32, p: Exponent, c: f64) -> EmdenFowler {
    let a = dim as f64 * p.inv();
    EmdenFowler {
        w: f.times_power(C64::new(a, 0.0)),
        drift: dim as f64 - 2.0 + c - 2.0 * a,
        zero_order: -omega_p(dim, p, c),
    }
}

impl EmdenFowler {
    pub fn jet(&self, s: f64) -> Jet {
        self.w.s_jet(s)
    }

    /// `w″ + drift·w′ + (zero_order − shift)·w`.
    pub fn apply(&self, s: f64, shift: C64) -> C64 {
        let [w, ws, wss] = self.jet(s);
        wss + self.drift * ws + (self.zero_order - shift) * w
    }

    /// `‖w‖` in `L^p(ds)`.
    pub fn norm(&self, p: Exponent, spec: &QuadratureSpec) -> Result<Norm> {
        let range = self.w.bounded_support()?;
        // the unweighted line measure is ρ^{−N} ρ^{N−1}dρ with N = 0 here
        log_weighted_norm(|s| self.w.ln_abs(s), 0.0, 0, p, range, &self.w.breakpoints(), spec)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HardyPair {
    pub lhs: f64,
    pub rhs: f64,
    pub ln_lhs: f64,
    pub ln_rhs: f64,
}

impl HardyPair {
    fn from_logs(ln_lhs: f64, ln_rhs: f64) -> Self {
        HardyPair { lhs: ln_lhs.exp(), rhs: ln_rhs.exp(), ln_lhs, ln_rhs }
    }

    pub fn quotient(&self) -> f64 {
        (self.ln_lhs - self.ln_rhs).exp()
    }
}

/// `(∫ρ^{β+N−1}|f′|^p dρ, ∫ρ^{β−p+N−1}|f|^p dρ)`.
pub fn hardy_lhs_rhs_radial(f: &RadialProfile, beta: f64, p: f64, dim: u32, spec: &QuadratureSpec) -> Result<HardyPair> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::InvalidParams(format!("p = {p} must be finite and at least 1")));
    }
    let e = Exponent::Finite(p);
    let range = f.bounded_support()?;
    let bps = f.breakpoints();
    let lhs = log_weighted_norm(|s| f.ln_abs_d1(s), beta, dim, e, range, &bps, spec)?;
    let rhs = log_weighted_norm(|s| f.ln_abs(s), beta - p, dim, e, range, &bps, spec)?;
    Ok(HardyPair::from_logs(p * lhs.ln, p * rhs.ln))
}

/// Zonal function on the half-space `{x_N > 0}`, with `θ ∈ [0, π/2)` the
/// angle from the `x_N` axis.
pub trait HalfSpaceField: Sync {
    /// `(ρ^{β+N}|∇u|²|u|^{p−2}, ρ^{β−2+N}|u|^p)` at `ρ = e^s`.
    fn weighted_densities(&self, s: f64, theta: f64, beta: f64, p: f64, dim: u32) -> (f64, f64);

    /// Range in `s` carrying the integrals.
    fn s_range(&self) -> (f64, f64);

    fn s_breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }

    /// Points in `θ` where the integrand changes scale at this `s`.
    fn theta_breakpoints(&self, _s: f64) -> Vec<f64> {
        Vec::new()
    }
}

/// A half-space field given by closed forms of `(u, ∂_ρ u, ∂_θ u)`.
pub struct ClosedField<F> {
    pub eval: F,
    pub range: (f64, f64),
    pub breakpoints: Vec<f64>,
}

impl<F: Fn(f64, f64) -> (f64, f64, f64) + Sync> HalfSpaceField for ClosedField<F> {
    fn weighted_densities(&self, s: f64, theta: f64, beta: f64, p: f64, dim: u32) -> (f64, f64) {
        let rho = s.exp();
        let (u, ur, ut) = (self.eval)(rho, theta);
        let a = u.abs();
        let grad = (ur * ur + ut * ut / (rho * rho)) * a.powf(p - 2.0);
        let n = dim as f64;
        let grad = if grad.is_finite() { grad } else { 0.0 };
        (rho.powf(beta + n) * grad, rho.powf(beta - 2.0 + n) * a.powf(p))
    }

    fn s_range(&self) -> (f64, f64) {
        self.range
    }

    fn s_breakpoints(&self) -> Vec<f64> {
        self.breakpoints.clone()
    }
}

/// `(lhs, rhs)` of the half-space Hardy inequality by nested adaptive
/// quadrature in `(s, θ)`; the factor `|S^{N−2}|` is omitted from both.
pub fn halfspace_hardy_quadrature(
    u: &dyn HalfSpaceField,
    beta: f64,
    p: f64,
    dim: u32,
    spec: &QuadratureSpec,
) -> Result<HardyPair> {
    if dim < 2 {
        return Err(Error::InvalidParams("half-space needs N >= 2".into()));
    }
    let (lo, hi) = u.s_range();
    let half_pi = std::f64::consts::FRAC_PI_2;
    let inner_spec = QuadratureSpec { rel_tol: spec.rel_tol * 1e-2, ..*spec };
    let jac = |t: f64| t.sin().powi(dim as i32 - 2);
    let side = |pick: usize| -> Result<f64> {
        let failure = std::cell::Cell::new(None);
        let outer = |s: f64| {
            let bps = u.theta_breakpoints(s);
            let g = |t: f64| {
                let (a, b) = u.weighted_densities(s, t, beta, p, dim);
                jac(t) * if pick == 0 { a } else { b }
            };
            match integrate(g, 0.0, half_pi, &bps, &inner_spec) {
                Ok(r) => r.value,
                Err(e) => {
                    failure.set(Some(e));
                    0.0
                }
            }
        };
        let r = integrate(outer, lo, hi, &u.s_breakpoints(), spec)?;
        match failure.take() {
            Some(e) => Err(e),
            None => Ok(r.value),
        }
    };
    let lhs = side(0)?;
    let rhs = side(1)?;
    Ok(HardyPair::from_logs(lhs.ln(), rhs.ln()))
}

/// Seeded random plateau profiles: centre uniform in `[−6, 6]`, width in
/// `[0.5, 4]`, transition width in `[0.3, 1.5]`, and every other profile
/// twisted by `ρ^{iξ}` with `ξ ∈ [−2, 2]`.
pub fn sample_profiles(count: usize, seed: u64) -> Vec<RadialProfile> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let centre = rng.gen_range(-6.0..6.0);
            let width = rng.gen_range(0.5..4.0);
            let t = rng.gen_range(0.3..1.5);
            let xi = rng.gen_range(-2.0..2.0);
            let base = RadialProfile::plateau(centre - width / 2.0, centre + width / 2.0, t);
            if i % 2 == 1 {
                base.times_power(C64::new(0.0, xi))
            } else {
                base
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn jets_match_finite_differences() {
        let f = RadialProfile::new(
            C64::new(-0.7, 0.4),
            Factor::Product(vec![
                Factor::Rise { start: -1.0, end: 0.2 },
                Factor::Fall { start: 1.0, end: 2.5 },
                Factor::Sum(vec![Factor::Const(ONE), Factor::ExpRho { a: -0.3 }]),
            ]),
        );
        for &rho in &[0.5, 0.9, 1.3, 2.0, 5.0, 9.0] {
            let h = 1e-5 * rho;
            let [_, d1, d2] = f.rho_jet(rho);
            let fd1 = (f.value(rho + h) - f.value(rho - h)) / (2.0 * h);
            let fd2 = (f.rho_jet(rho + h)[1] - f.rho_jet(rho - h)[1]) / (2.0 * h);
            assert!((d1 - fd1).norm() < 1e-7 * (1.0 + d1.norm()), "ρ = {rho}");
            assert!((d2 - fd2).norm() < 1e-6 * (1.0 + d2.norm()), "ρ = {rho}");
        }
    }

    #[test]
    fn plateau_norm_is_its_length_in_s() {
        // weight −N turns ρ^{N−1}dρ into ds
        let f = RadialProfile::plateau(0.0, 1.0, 1e-3);
        let n = weighted_pnorm(&f, -3.0, Exponent::Finite(1.0), 3, &spec()).unwrap();
        assert!((n.value() - 1.001).abs() < 1e-3);
    }

    #[test]
    fn norms_are_homogeneous() {
        let f = RadialProfile::plateau(0.0, 2.0, 0.5);
        let g = RadialProfile::new(ZERO, Factor::Product(vec![Factor::Const(C64::new(3.0, 0.0)), f.body.clone()]));
        let a = weighted_pnorm(&f, -2.0, Exponent::Finite(2.0), 2, &spec()).unwrap().value();
        let b = weighted_pnorm(&g, -2.0, Exponent::Finite(2.0), 2, &spec()).unwrap().value();
        assert_relative_eq!(b, 3.0 * a, max_relative = 1e-12);
    }

    #[test]
    fn dilation_covariance() {
        let f = RadialProfile::plateau(-1.0, 1.5, 0.7).times_power(C64::new(0.3, 1.1));
        for p in [Exponent::Finite(1.5), Exponent::Finite(3.0)] {
            let (we, dim, lam) = (0.8, 4, 2.7);
            let a = weighted_pnorm(&f, we, p, dim, &spec()).unwrap().value();
            let b = weighted_pnorm(&f.dilate(lam), we, p, dim, &spec()).unwrap().value();
            assert_relative_eq!(b, a * lam.powf(-(we + dim as f64) / p.as_f64()), max_relative = 1e-9);
        }
    }

    #[test]
    fn operand_of_a_power() {
        // pure power times a plateau: on the plateau only the indicial polynomial remains
        let z = C64::new(-1.2, 0.5);
        let f = RadialProfile::plateau(-2.0, 2.0, 1.0).times_power(z);
        let (dim, c, shift) = (5, C64::new(0.3, 0.0), C64::new(2.0, 0.0));
        let op = apply_radial_rellich_operand(&f, dim, c, shift);
        for &rho in &[0.3, 1.0, 4.0] {
            let want = (z * (z - 1.0) + (dim as f64 - 1.0 + c) * z - shift) * C64::new(rho, 0.0).powc(z - 2.0);
            assert!((op.value(rho) - want).norm() < 1e-12 * want.norm());
        }
    }

    #[test]
    fn hessian_of_quadratic() {
        let f = RadialProfile::plateau(-3.0, 3.0, 1.0).times_power(C64::new(2.0, 0.0));
        assert_relative_eq!(radial_hessian_frobenius(&f, 1.0, 4), 4.0, max_relative = 1e-12);
        let flat = RadialProfile::plateau(-3.0, 3.0, 1.0);
        assert!(radial_hessian_frobenius(&flat, 1.0, 4) < 1e-14);
    }

    #[test]
    fn emden_fowler_isometry_and_operator() {
        let f = RadialProfile::plateau(-0.5, 1.0, 0.8).times_power(C64::new(0.2, -0.6));
        let (dim, c) = (4, 0.4);
        for p in [Exponent::Finite(1.0), Exponent::Finite(2.0), Exponent::Finite(3.0)] {
            let ef = emden_fowler(&f, dim, p, c);
            let a = weighted_pnorm(&f, 0.0, p, dim, &spec()).unwrap().value();
            assert_relative_eq!(ef.norm(p, &spec()).unwrap().value(), a, max_relative = 1e-9);
            let shift = C64::new(1.5, 0.0);
            for &s in &[-0.7, 0.1, 0.9, 1.4] {
                let rho = f64::exp(s);
                let op = apply_radial_rellich_operand(&f, dim, C64::new(c, 0.0), shift).value(rho);
                let want = op * rho * rho * (dim as f64 * p.inv() * s).exp();
                assert!((ef.apply(s, shift) - want).norm() < 1e-10 * (1.0 + want.norm()));
            }
        }
    }

    #[test]
    fn hardy_bound_on_samples() {
        for f in sample_profiles(10, 7) {
            for (beta, p, dim) in [(0.0, 2.0, 3u32), (1.0, 3.0, 4), (-1.0, 1.5, 5)] {
                let pair = hardy_lhs_rhs_radial(&f, beta, p, dim, &spec()).unwrap();
                let bound = ((beta - p + dim as f64) / p).abs().powf(p);
                assert!(pair.quotient() >= bound * (1.0 - 1e-9));
            }
        }
    }

    #[test]
    fn unbounded_support_is_rejected() {
        let f = RadialProfile::new(ONE, Factor::Const(ONE));
        assert!(weighted_pnorm(&f, 0.0, Exponent::Finite(2.0), 3, &spec()).is_err());
    }
}
