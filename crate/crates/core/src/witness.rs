//! Extremizing and counterexample families with closed-form derivatives.

use std::f64::consts::LN_2;

use serde::Serialize;

use crate::constants::{gamma_p, lambda_n, parabola};
use crate::error::{Error, Result};
use crate::params::{Exponent, ProblemParams};
use crate::parabola::{closed_form_argmin, dist_numeric};
use crate::radial::{Factor, HalfSpaceField, RadialProfile};
use crate::special::ln_gamma;
use crate::C64;

/// Placement of the two transitions of a cutoff around the plateau `[1/k, k]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CutoffShape {
    /// Transitions on `[1/(2k), 1/k]` and `[k, 2k]`.
    Narrow,
    /// Transitions on `[1/k², 1/k]` and `[k, k²]`; derivatives decay like `1/log k`.
    Stretched,
}

/// `φ_k`: 0 near the origin and infinity, 1 on `[1/k, k]`, parameterised by
/// `ln k` so that scales far beyond `f64` stay representable.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CutoffFamily {
    pub log_k: f64,
    pub shape: CutoffShape,
}

impl CutoffFamily {
    pub fn new(k: f64, shape: CutoffShape) -> Result<Self> {
        if !(k >= 2.0) {
            return Err(Error::InvalidParams(format!("cutoff scale k = {k} must be at least 2")));
        }
        Ok(CutoffFamily { log_k: k.ln(), shape })
    }

    pub fn from_log(log_k: f64, shape: CutoffShape) -> Result<Self> {
        if !(log_k >= LN_2) {
            return Err(Error::InvalidParams(format!("ln k = {log_k} below ln 2")));
        }
        Ok(CutoffFamily { log_k, shape })
    }

    /// `(s₀, s₁)` with the rise on `[−s₁, −s₀]` and the fall on `[s₀, s₁]`.
    pub fn transitions(&self) -> (f64, f64) {
        let l = self.log_k;
        match self.shape {
            CutoffShape::Narrow => (l, l + LN_2),
            CutoffShape::Stretched => (l, 2.0 * l),
        }
    }

    pub fn factor(&self) -> Factor {
        let (a, b) = self.transitions();
        Factor::Product(vec![Factor::Rise { start: -b, end: -a }, Factor::Fall { start: a, end: b }])
    }

    pub fn profile(&self) -> RadialProfile {
        RadialProfile::new(C64::new(0.0, 0.0), self.factor())
    }

    /// `(C₁, C₂)` with `|φ′| ≤ C₁ k` and `|φ″| ≤ C₂ k²` on the inner transition
    /// and `C₁/k`, `C₂/k²` on the outer one, from a dense sample.
    pub fn derivative_constants(&self) -> (f64, f64) {
        let (a, b) = self.transitions();
        let phi = self.profile();
        let lk = self.log_k;
        let mut c1: f64 = 0.0;
        let mut c2: f64 = 0.0;
        let samples = 2000;
        for i in 0..=samples {
            let t = i as f64 / samples as f64;
            for (s, scale) in [(-b + (b - a) * t, lk), (a + (b - a) * t, -lk)] {
                // at ρ = e^s compare against k^{±1} and k^{±2} in log form
                let [_, d1, d2] = phi.s_jet(s);
                let ln1 = d1.norm().ln() - s - scale;
                let ln2 = (d2 - d1).norm().ln() - 2.0 * s - 2.0 * scale;
                c1 = c1.max(ln1.exp());
                c2 = c2.max(ln2.exp());
            }
        }
        (c1, c2)
    }
}

/// `φ_k(ρ) ρ^{−N/p + iξ}`.
pub fn spectral_witness(cutoff: &CutoffFamily, xi: f64, dim: u32, p: Exponent) -> RadialProfile {
    RadialProfile::new(C64::new(-(dim as f64) * p.inv(), xi), cutoff.factor())
}

/// `φ_k(ρ) ρ^{2 − α − N/p + iξ}` with `ξ = η − Im c/2`, so that on the plateau
/// the Rellich operand equals `(P(η) − b − λ_n)` times the profile.
pub fn rellich_witness(params: &ProblemParams, eta: f64, cutoff: &CutoffFamily) -> RadialProfile {
    let re = 2.0 - params.alpha - params.n() * params.p.inv();
    RadialProfile::new(C64::new(re, eta - 0.5 * params.c.im), cutoff.factor())
}

/// Parabola parameter nearest to `b + λ_n`; ties go to the vertex.
pub fn nearest_parameter(params: &ProblemParams, n: u32) -> f64 {
    let par = parabola(params);
    let target = params.b + lambda_n(params.dim, n);
    if params.p.is_two() && params.has_real_coefficients() {
        let shifted = target.re + gamma_p(params).re;
        return closed_form_argmin(shifted, 0.5 * par.tilt);
    }
    dist_numeric(target, &par).xi
}

/// Spectral witness at the minimiser of the `p = 2` distance.
pub fn p2_optimal_witness(params: &ProblemParams, n: u32, cutoff: &CutoffFamily) -> Result<RadialProfile> {
    if !params.p.is_two() {
        return Err(Error::InvalidParams("the L² optimiser needs p = 2".into()));
    }
    Ok(rellich_witness(params, nearest_parameter(params, n), cutoff))
}

/// Rise of the cutoff `φ(|x|^{1/m})`: 0 below `4^{−m}`, 1 above `2^{−m}`.
fn inner_rise(m: f64) -> Factor {
    Factor::Rise { start: -2.0 * m * LN_2, end: -m * LN_2 }
}

/// `Γ(pε)^{−1/p} φ(|x|^{1/m}) |x|^{−(β−p+N)/p+ε} e^{−|x|/p}`.
pub fn hardy_witness(epsilon: f64, m: f64, beta: f64, p: f64, dim: u32) -> Result<RadialProfile> {
    if !(epsilon > 0.0 && epsilon <= 0.5) || !(m >= 1.0) || !(p >= 1.0 && p.is_finite()) {
        return Err(Error::InvalidParams("need 0 < ε ≤ 1/2, m ≥ 1, 1 ≤ p < ∞".into()));
    }
    let norm = (-ln_gamma(p * epsilon) / p).exp();
    let z = -(beta - p + dim as f64) / p + epsilon;
    Ok(RadialProfile::new(
        C64::new(z, 0.0),
        Factor::Product(vec![Factor::Const(C64::new(norm, 0.0)), inner_rise(m), Factor::ExpRho { a: -1.0 / p }]),
    ))
}

impl Factor {
    /// `g(s/m)`, defined for factors without `exp(aρ)` terms.
    pub fn stretched(&self, m: f64) -> Result<Factor> {
        Ok(match self {
            Factor::Const(c) => Factor::Const(*c),
            Factor::Exp { rate } => Factor::Exp { rate: rate / m },
            Factor::ExpRho { .. } => return Err(Error::InvalidParams("exp(aρ) does not stretch in log ρ".into())),
            Factor::Rise { start, end } => Factor::Rise { start: start * m, end: end * m },
            Factor::Fall { start, end } => Factor::Fall { start: start * m, end: end * m },
            Factor::Bump { start, end } => Factor::Bump { start: start * m, end: end * m },
            Factor::Product(fs) => Factor::Product(fs.iter().map(|f| f.stretched(m)).collect::<Result<_>>()?),
            Factor::Sum(fs) => Factor::Sum(fs.iter().map(|f| f.stretched(m)).collect::<Result<_>>()?),
        })
    }
}

/// `m^{2−1/p} φ(log|x| / m)` in the plane.
pub fn cz2_counterexample(m: f64, p: f64, phi: &Factor) -> Result<RadialProfile> {
    let (lo, hi) = phi.support();
    if !(lo > 0.0 && hi.is_finite()) {
        return Err(Error::InvalidParams("φ must be supported in a compact subset of (0, ∞)".into()));
    }
    let amp = m.powf(2.0 - 1.0 / p);
    Ok(RadialProfile::new(
        C64::new(0.0, 0.0),
        Factor::Product(vec![Factor::Const(C64::new(amp, 0.0)), phi.stretched(m)?]),
    ))
}

/// `φ_m(|x|) x_N^{2/p} |x|^{−(N+β)/p+ε} e^{−|x′|/p}` on the upper half-space.
///
/// The transverse damping leaves the axis undamped, so the weighted gradient
/// integral grows with the outer radius; `φ_m` therefore also switches off on
/// `[1, 2]` in `|x|`, a fixed edge whose contribution vanishes as `ε → 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HalfSpaceHardyWitness {
    pub epsilon: f64,
    pub m: f64,
    pub beta: f64,
    pub p: f64,
    pub dim: u32,
}

pub fn halfspace_hardy_witness(epsilon: f64, m: f64, beta: f64, p: f64, dim: u32) -> Result<HalfSpaceHardyWitness> {
    if !(epsilon > 0.0 && epsilon <= 0.5) || !(m >= 1.0) || !(p >= 2.0 && p.is_finite()) || dim < 2 {
        return Err(Error::InvalidParams("need 0 < ε ≤ 1/2, m ≥ 1, 2 ≤ p < ∞, N ≥ 2".into()));
    }
    Ok(HalfSpaceHardyWitness { epsilon, m, beta, p, dim })
}

impl HalfSpaceHardyWitness {
    fn cutoff(&self) -> Factor {
        Factor::Product(vec![inner_rise(self.m), Factor::Fall { start: 0.0, end: LN_2 }])
    }

    /// Radial exponent `a` with `u = φ_m ρ^a g^{2/p} e^{−ρh/p}`.
    fn radial_exponent(&self) -> f64 {
        (2.0 - self.dim as f64 - self.beta) / self.p + self.epsilon
    }

    /// `(u, ∂_ρ u, ∂_θ u)` at `(ρ, θ)`.
    pub fn eval(&self, rho: f64, theta: f64) -> (f64, f64, f64) {
        let [f, fs, _] = self.cutoff().jet(rho.ln()).map(|v| v.re);
        let (g, h) = (theta.cos(), theta.sin());
        let (a, p) = (self.radial_exponent(), self.p);
        let big_r = f * rho.powf(a);
        let e = (-rho * h / p).exp();
        let gp = g.powf(2.0 / p);
        let u = big_r * gp * e;
        let r_rho = rho.powf(a - 1.0) * (fs + a * f);
        let u_rho = gp * e * (r_rho - big_r * h / p);
        let u_theta = -big_r * e * g.powf(2.0 / p - 1.0) * ((2.0 / p) * h + rho * g * g / p);
        (u, u_rho, u_theta)
    }
}

impl HalfSpaceField for HalfSpaceHardyWitness {
    fn weighted_densities(&self, s: f64, theta: f64, beta: f64, p: f64, dim: u32) -> (f64, f64) {
        // with the exponent of the family the weights collapse to e^{pεs}
        debug_assert!(beta == self.beta && p == self.p && dim == self.dim);
        let rho = s.exp();
        let [f, fs, _] = self.cutoff().jet(s).map(|v| v.re);
        if f == 0.0 && fs == 0.0 {
            return (0.0, 0.0);
        }
        let (g, h) = (theta.cos(), theta.sin());
        let a = self.radial_exponent();
        let w = (p * self.epsilon * s - rho * h).exp();
        let fa = f.abs();
        let radial = fs + a * f - rho * h * f / p;
        let angular = (2.0 / p) * h + rho * g * g / p;
        let grad = fa.powf(p - 2.0) * (g * g * radial * radial + f * f * angular * angular);
        (w * grad, w * fa.powf(p) * g * g)
    }

    fn s_range(&self) -> (f64, f64) {
        (-2.0 * self.m * LN_2, LN_2)
    }

    fn s_breakpoints(&self) -> Vec<f64> {
        vec![-self.m * LN_2, 0.0]
    }

    fn theta_breakpoints(&self, s: f64) -> Vec<f64> {
        let rho = s.exp();
        [1.0, 10.0].iter().map(|c| c / rho).filter(|&t| t < std::f64::consts::FRAC_PI_2).collect()
    }
}
