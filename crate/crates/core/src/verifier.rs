//! Quotients, witness scans and failure demonstrations for the inequalities.
//!
//! All quotients are norm ratios, `‖|x|^α L u‖_p / ‖|x|^{α−2} u‖_p`, on
//! separable `u = f(ρ)P(ω)`; the spherical factor cancels so every number
//! here comes from one-dimensional quadrature in `s = log ρ`.

use rayon::prelude::*;
use serde::Serialize;

use crate::constants::{best_constant, lambda_n, mode_constant, omega_p, omega_p_plus, rellich_validity};
use crate::constants::ConstantEstimate;
use crate::error::{Error, Result};
use crate::params::{Domain, Exponent, ModeSet, ProblemParams};
use crate::quadrature::{integrate, QuadratureSpec};
use crate::radial::{
    apply_radial_rellich_operand, ln_hessian, ln_laplacian, log_weighted_norm, weighted_pnorm, Norm, RadialProfile,
};
use crate::sphere::{is_odd_in_last_coordinate, HarmonicIndex};
use crate::witness::{nearest_parameter, rellich_witness, spectral_witness, CutoffFamily};
use crate::C64;

/// Relative slack a quotient may fall below a certified lower bound.
pub const VERDICT_TOL: f64 = 1e-6;

/// Nodes and step of the coarse `ξ` grid around the analytic minimiser.
const SCAN_NODES: usize = 41;
const SCAN_STEP: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    SatisfiesBound,
    ViolatesBound,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Diagnostics {
    pub numerator_rel_error: f64,
    pub denominator_rel_error: f64,
    pub evaluations: usize,
    pub verdict_tol: f64,
}

impl Diagnostics {
    fn from_norms(num: &Norm, den: &Norm) -> Self {
        Diagnostics {
            numerator_rel_error: num.rel_error,
            denominator_rel_error: den.rel_error,
            evaluations: num.evaluations + den.evaluations,
            verdict_tol: VERDICT_TOL,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuotientReport {
    pub params: ProblemParams,
    pub n: u32,
    pub numerator: f64,
    pub denominator: f64,
    /// Norm ratio.
    pub quotient: f64,
    /// `quotient^p`, equal to `quotient` at `p = ∞`.
    pub power_quotient: f64,
    /// `ln quotient`, finite even when the norms themselves overflow.
    pub ln_ratio: f64,
    pub predicted: Option<ConstantEstimate>,
    pub verdict: Verdict,
    pub diagnostics: Diagnostics,
}

pub fn verdict(quotient: f64, predicted: Option<&ConstantEstimate>) -> Verdict {
    match predicted.and_then(ConstantEstimate::lower_bound) {
        Some(lower) if quotient >= lower * (1.0 - VERDICT_TOL) => Verdict::SatisfiesBound,
        Some(_) => Verdict::ViolatesBound,
        None => Verdict::Inconclusive,
    }
}

fn report(
    params: &ProblemParams,
    n: u32,
    num: Norm,
    den: Norm,
    predicted: Option<ConstantEstimate>,
) -> Result<QuotientReport> {
    if den.ln == f64::NEG_INFINITY {
        return Err(Error::ZeroDenominator);
    }
    let ln_ratio = num.ln - den.ln;
    let quotient = ln_ratio.exp();
    Ok(QuotientReport {
        params: params.clone(),
        n,
        numerator: num.value(),
        denominator: den.value(),
        quotient,
        power_quotient: (params.p.power() * ln_ratio).exp(),
        ln_ratio,
        verdict: verdict(quotient, predicted.as_ref()),
        predicted,
        diagnostics: Diagnostics::from_norms(&num, &den),
    })
}

/// Weight exponents `(numerator, denominator)` handed to the log-space norms.
fn rellich_weights(alpha: f64, p: Exponent) -> (f64, f64) {
    let q = p.power();
    (alpha * q, (alpha - 2.0) * q)
}

fn quotient_against(
    params: &ProblemParams,
    n: u32,
    f: &RadialProfile,
    spec: &QuadratureSpec,
    predicted: Option<ConstantEstimate>,
) -> Result<QuotientReport> {
    let shift = params.b + lambda_n(params.dim, n);
    let op = apply_radial_rellich_operand(f, params.dim, params.c, shift);
    let (wn, wd) = rellich_weights(params.alpha, params.p);
    let num = op.weighted_pnorm(wn, params.p, spec)?;
    let den = weighted_pnorm(f, wd, params.p, params.dim, spec)?;
    report(params, n, num, den, predicted)
}

/// Rellich quotient of `u = f(ρ)P_n(ω)`, judged against the best constant of
/// mode `n` alone when that constant has a certified lower bound.
pub fn rellich_quotient(params: &ProblemParams, n: u32, f: &RadialProfile, spec: &QuadratureSpec) -> Result<QuotientReport> {
    params.validate()?;
    quotient_against(params, n, f, spec, mode_constant(params, n).ok())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub params: ProblemParams,
    pub n: u32,
    pub log_k: f64,
    pub xi_star: f64,
    pub argmin: f64,
    /// Smallest norm quotient seen; an upper bound on the mode-`n` constant.
    pub empirical_inf: f64,
    pub empirical_inf_power: f64,
    pub predicted: Option<ConstantEstimate>,
    pub verdict: Verdict,
}

/// Quotients on `grid` in order, evaluated in parallel.
fn quotients_on(
    params: &ProblemParams,
    n: u32,
    cutoff: &CutoffFamily,
    grid: &[f64],
    spec: &QuadratureSpec,
) -> Result<Vec<f64>> {
    grid.par_iter()
        .map(|&xi| {
            let f = rellich_witness(params, xi, cutoff);
            quotient_against(params, n, &f, spec, None).map(|r| r.quotient)
        })
        .collect()
}

/// First index of the minimum; ties keep the earlier node.
fn argmin(values: &[f64]) -> usize {
    values
        .iter()
        .enumerate()
        .fold(0, |best, (i, v)| if *v < values[best] { i } else { best })
}

fn centred_grid(centre: f64, step: f64, nodes: usize) -> Vec<f64> {
    let half = (nodes / 2) as f64;
    (0..nodes).map(|i| centre + (i as f64 - half) * step).collect()
}

/// Minimum of the Rellich quotient over witnesses `rellich_witness(ξ)` on a
/// 41-node grid around the analytic minimiser, refined once around the best
/// node.
pub fn rellich_scan(params: &ProblemParams, n: u32, cutoff: &CutoffFamily, spec: &QuadratureSpec) -> Result<ScanReport> {
    params.validate()?;
    let xi_star = nearest_parameter(params, n);
    let coarse = centred_grid(xi_star, SCAN_STEP, SCAN_NODES);
    let qc = quotients_on(params, n, cutoff, &coarse, spec)?;
    let i = argmin(&qc);
    let fine = centred_grid(coarse[i], SCAN_STEP / 10.0, 21);
    let qf = quotients_on(params, n, cutoff, &fine, spec)?;
    let j = argmin(&qf);
    let (best, at) = if qf[j] < qc[i] { (qf[j], fine[j]) } else { (qc[i], coarse[i]) };
    let predicted = mode_constant(params, n).ok();
    Ok(ScanReport {
        params: params.clone(),
        n,
        log_k: cutoff.log_k,
        xi_star,
        argmin: at,
        empirical_inf: best,
        empirical_inf_power: best.powf(params.p.power()),
        verdict: verdict(best, predicted.as_ref()),
        predicted,
    })
}

/// Rellich quotients of witnesses sitting exactly on the parabola point of a
/// failing mode, one per cutoff scale.
pub fn failure_demo(
    params: &ProblemParams,
    n_violating: u32,
    cutoffs: &[CutoffFamily],
    spec: &QuadratureSpec,
) -> Result<Vec<f64>> {
    let single = params.clone().with_modes(ModeSet::single(n_violating)).with_domain(Domain::WholeSpace);
    if rellich_validity(&single, None)?.holds {
        return Err(Error::PreconditionViolated(format!("mode {n_violating} satisfies the inequality")));
    }
    let xi = nearest_parameter(params, n_violating);
    cutoffs
        .par_iter()
        .map(|c| {
            let f = rellich_witness(params, xi, c);
            quotient_against(params, n_violating, &f, spec, None).map(|r| r.quotient)
        })
        .collect()
}

/// `‖|x|^α D²u‖_p / ‖|x|^α Δu‖_p` for radial `u = f(ρ)`; no constant is
/// predicted since the sharp one is unknown.
pub fn cz_quotient_radial(dim: u32, p: Exponent, alpha: f64, f: &RadialProfile, spec: &QuadratureSpec) -> Result<QuotientReport> {
    let params = ProblemParams::new(dim, p, alpha);
    params.validate()?;
    let (lo, hi) = f.support();
    let bps = f.breakpoints();
    let w = alpha * p.power();
    let num = log_weighted_norm(|s| ln_hessian(f, s, dim), w, dim, p, (lo, hi), &bps, spec)?;
    let den = log_weighted_norm(|s| ln_laplacian(f, s, dim), w, dim, p, (lo, hi), &bps, spec)?;
    report(&params, 0, num, den, None)
}

/// `(|(N/p + α − 2)(N/p + α − 1)|·‖ρ^{α−2}f‖_p, ‖ρ^α D²u‖_p)`; the first never
/// exceeds the second.
pub fn double_hardy_check(dim: u32, p: f64, alpha: f64, f: &RadialProfile, spec: &QuadratureSpec) -> Result<(f64, f64)> {
    let e = Exponent::new(p)?;
    let (lo, hi) = f.support();
    let bps = f.breakpoints();
    let t = dim as f64 / p + alpha;
    let lower = weighted_pnorm(f, (alpha - 2.0) * p, e, dim, spec)?;
    let hess = log_weighted_norm(|s| ln_hessian(f, s, dim), alpha * p, dim, e, (lo, hi), &bps, spec)?;
    Ok((((t - 2.0) * (t - 1.0)).abs() * lower.value(), hess.value()))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Dissipativity {
    /// `−Re ∫ Au·ū|u|^{p−2}` with `A = |x|²Δ + c x·∇`.
    pub lhs: f64,
    /// `ω·‖u‖_p^p` with `ω = ω_p` or `ω_p⁺`.
    pub rhs: f64,
    pub omega: f64,
    pub mass: f64,
    /// Right side of the integration-by-parts identity,
    /// `(p−1)∫|x|²|u|^{p−2}|∇u|² − N(2−c)/p·∫|u|^p + λ_n∫|u|^p`.
    pub identity_rhs: f64,
}

impl Dissipativity {
    pub fn ratio(&self) -> f64 {
        self.lhs / self.mass
    }
}

/// Both sides of the dissipativity estimate on `u = f(ρ)P_n(ω)`, per unit of
/// `∫_S |P_n|^p`.
///
/// On the half-space the mode must be odd in `x_N` and `ω_p⁺` replaces `ω_p`.
pub fn dissipativity_check(params: &ProblemParams, f: &RadialProfile, n: u32, spec: &QuadratureSpec) -> Result<Dissipativity> {
    params.validate()?;
    let Exponent::Finite(p) = params.p else {
        return Err(Error::InvalidParams("dissipativity needs finite p".into()));
    };
    if p <= 1.0 || params.b.norm() != 0.0 || params.c.im != 0.0 {
        return Err(Error::InvalidParams("dissipativity needs p > 1, b = 0 and real c".into()));
    }
    let (dim, c) = (params.dim, params.c.re);
    let nd = dim as f64;
    let omega = match params.domain {
        Domain::HalfSpace => {
            if n % 2 == 0 {
                return Err(Error::EvenModeRejected { n, m: 0 });
            }
            omega_p_plus(dim, params.p, c)
        }
        _ => omega_p(dim, params.p, c),
    };
    let lam = lambda_n(dim, n);
    let (lo, hi) = f.support();
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::Domain("profile support must be bounded in log ρ".into()));
    }
    let bps = f.breakpoints();
    // w(s) = f(e^s) = e^{zs}r(s); ρ²f″ + (N−1+c)ρf′ = w_ss + (N−2+c)w_s, and
    // every density carries the common factor e^{(p Re z + N)s}
    let z = f.exponent;
    let pieces = |s: f64| {
        let [w, ws, wss] = f.reduced_jet(s);
        let a = w.norm();
        if a == 0.0 {
            return (0.0, 0.0, 0.0);
        }
        let weight = ((p * z.re + nd) * s).exp();
        let pm2 = a.powf(p - 2.0);
        let au = wss + (nd - 2.0 + c) * ws - lam * w;
        let lhs = -(au * w.conj()).re * pm2 * weight;
        let grad = ws.norm_sqr() * pm2 * weight;
        (lhs, grad, a.powf(p) * weight)
    };
    let lhs = integrate(|s| pieces(s).0, lo, hi, &bps, spec)?.value;
    let grad = integrate(|s| pieces(s).1, lo, hi, &bps, spec)?.value;
    let mass = integrate(|s| pieces(s).2, lo, hi, &bps, spec)?.value;
    Ok(Dissipativity {
        lhs,
        rhs: omega * mass,
        omega,
        mass,
        identity_rhs: (p - 1.0) * grad - nd * (2.0 - c) / p * mass + lam * mass,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InterpolationEstimate {
    pub eps_used: Vec<f64>,
    /// Smallest admissible constant at each `ε`.
    pub per_eps: Vec<f64>,
    pub c_estimate: f64,
}

/// `ln |f″(e^s)|`.
fn ln_abs_d2(f: &RadialProfile, s: f64) -> f64 {
    let [_, ws, wss] = f.reduced_jet(s);
    (f.exponent.re - 2.0) * s + (wss - ws).norm().ln()
}

/// Smallest `C` with `‖ρ^{β−1}f′‖_p ≤ ε‖ρ^β f″‖_p + (C/ε)‖ρ^{β−2}f‖_p` on
/// `(0, ∞)` across `profiles`, at `ε = 2^{−j}` for `j = 0..levels`.
pub fn interpolation_constant_estimate(
    beta: f64,
    p: Exponent,
    profiles: &[RadialProfile],
    levels: u32,
    spec: &QuadratureSpec,
) -> Result<InterpolationEstimate> {
    let q = p.power();
    let norms: Vec<(f64, f64, f64)> = profiles
        .par_iter()
        .map(|f| {
            let (lo, hi) = f.support();
            let bps = f.breakpoints();
            let d1 = log_weighted_norm(|s| f.ln_abs_d1(s), (beta - 1.0) * q, 1, p, (lo, hi), &bps, spec)?;
            let d2 = log_weighted_norm(|s| ln_abs_d2(f, s), beta * q, 1, p, (lo, hi), &bps, spec)?;
            let d0 = weighted_pnorm(f, (beta - 2.0) * q, p, 1, spec)?;
            Ok((d1.value(), d2.value(), d0.value()))
        })
        .collect::<Result<_>>()?;
    let eps_used: Vec<f64> = (0..levels).map(|j| 0.5f64.powi(j as i32)).collect();
    let per_eps: Vec<f64> = eps_used
        .iter()
        .map(|&e| {
            norms
                .iter()
                .filter(|(_, _, d0)| *d0 > 0.0)
                .map(|&(d1, d2, d0)| (e * (d1 - e * d2) / d0).max(0.0))
                .fold(0.0, f64::max)
        })
        .collect();
    let c_estimate = per_eps.iter().copied().fold(0.0, f64::max);
    Ok(InterpolationEstimate { eps_used, per_eps, c_estimate })
}

/// Rellich quotient of `f(ρ)P(ω)` with `P` odd in `x_N`, judged against the
/// half-space bracket.
pub fn halfspace_rellich_quotient(
    params: &ProblemParams,
    idx: HarmonicIndex,
    f: &RadialProfile,
    spec: &QuadratureSpec,
) -> Result<QuotientReport> {
    if !is_odd_in_last_coordinate(idx, params.dim) {
        return Err(Error::EvenModeRejected { n: idx.n, m: idx.m });
    }
    let half = params.clone().with_domain(Domain::HalfSpace);
    half.validate()?;
    quotient_against(&half, idx.n, f, spec, best_constant(&half).ok())
}

/// `‖(A − μ)u‖_p / ‖u‖_p` for the spectral witness at `ξ`, where `A` is
/// `|x|²Δ + c x·∇` on mode `n` and `μ` is its approximate eigenvalue
/// `z² + (N−2+c)z − λ_n` with `z = −N/p + iξ`. The mode drops out.
pub fn spectral_residual_ratio(
    cutoff: &CutoffFamily,
    xi: f64,
    dim: u32,
    p: Exponent,
    c: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let u = spectral_witness(cutoff, xi, dim, p);
    let z = u.exponent;
    let shift = z * z + (dim as f64 - 2.0 + c) * z;
    let op = apply_radial_rellich_operand(&u, dim, C64::new(c, 0.0), shift);
    let num = op.weighted_pnorm(2.0 * p.power(), p, spec)?;
    let den = weighted_pnorm(&u, 0.0, p, dim, spec)?;
    Ok((num.ln - den.ln).exp())
}
