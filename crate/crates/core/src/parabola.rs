//! Spectral parabolas `{−ξ² + isξ − γ}`, distances to them, unions over
//! spherical modes, resolvent norms and the resolvent kernel on the line.

use serde::Serialize;

use crate::constants::{lambda_n, omega_p};
use crate::error::{Error, Result};
use crate::params::Exponent;
use crate::quadrature::golden_max;
use crate::C64;

/// Tilts below this are treated as a degenerate half-line.
pub const DEGENERATE_TILT: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Parabola {
    pub tilt: f64,
    #[serde(serialize_with = "ser_c64")]
    pub gamma: C64,
}

fn ser_c64<S: serde::Serializer>(z: &C64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

impl Parabola {
    pub fn new(tilt: f64, gamma: C64) -> Self {
        Parabola { tilt, gamma }
    }

    pub fn point(&self, xi: f64) -> C64 {
        C64::new(-xi * xi, self.tilt * xi) - self.gamma
    }

    pub fn vertex(&self) -> C64 {
        -self.gamma
    }

    pub fn is_degenerate(&self) -> bool {
        self.tilt.abs() < DEGENERATE_TILT
    }

    /// Distance from `z`; see [`dist_numeric`].
    pub fn distance(&self, z: C64) -> f64 {
        dist_numeric(z, self).distance
    }
}

/// Nearest point on a parabola.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Closest {
    pub distance: f64,
    /// Parameter of the nearest point.
    pub xi: f64,
}

/// Squared distance from real `λ` to `{−ξ² + 2iκξ}`, in closed form.
pub fn dist_to_parabola_closed(lambda: f64, kappa: f64) -> f64 {
    let k2 = kappa * kappa;
    if lambda >= -2.0 * k2 {
        lambda * lambda
    } else {
        4.0 * k2 * (-lambda - k2)
    }
}

/// Parameter of the nearest point in the closed-form setting; ties go to 0.
pub fn closed_form_argmin(lambda: f64, kappa: f64) -> f64 {
    let k2 = kappa * kappa;
    if lambda >= -2.0 * k2 {
        0.0
    } else {
        (-lambda - 2.0 * k2).sqrt()
    }
}

/// Distance from complex `z` to `par` by direct minimisation over `ξ`.
///
/// `|z − par(ξ)|²` is a quartic in `ξ` whose critical points solve
/// `ξ³ + aξ + b = 0`; a uniform grid over a window enclosing all roots is
/// refined by golden section around every local grid minimum.
pub fn dist_numeric(z: C64, par: &Parabola) -> Closest {
    let w = z + par.gamma;
    let (x, y) = (w.re, w.im);
    if par.is_degenerate() {
        return if x <= 0.0 {
            Closest { distance: y.abs(), xi: (-x).sqrt() }
        } else {
            Closest { distance: w.norm(), xi: 0.0 }
        };
    }
    let s = par.tilt;
    let d2 = |xi: f64| {
        let re = x + xi * xi;
        let im = y - s * xi;
        re * re + im * im
    };
    // every critical point lies within the Fujiwara bound of ξ³ + aξ + b
    let a = x + 0.5 * s * s;
    let b = -0.5 * s * y;
    let fujiwara = 2.0 * a.abs().sqrt().max((0.5 * b.abs()).cbrt());
    let window = (fujiwara * 1.01 + 1e-3).max(2.0 * (1.0 + (x.abs() + par.gamma.norm() + s.abs()).sqrt()));
    let m = 2000;
    let h = 2.0 * window / m as f64;
    let grid: Vec<f64> = (0..=m).map(|i| d2(-window + h * i as f64)).collect();
    let mut best = Closest { distance: f64::INFINITY, xi: 0.0 };
    for i in 0..=m {
        let left = if i == 0 { f64::INFINITY } else { grid[i - 1] };
        let right = if i == m { f64::INFINITY } else { grid[i + 1] };
        if grid[i] <= left && grid[i] <= right {
            let lo = -window + h * (i as f64 - 1.0);
            let hi = -window + h * (i as f64 + 1.0);
            let (xi, neg) = golden_max(&|t: f64| -d2(t), lo, hi);
            let dist = (-neg).max(0.0).sqrt();
            if dist < best.distance || (dist == best.distance && xi.abs() < best.xi.abs()) {
                best = Closest { distance: dist, xi };
            }
        }
    }
    best
}

/// `∪_{n∈J} (base − λ_n)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumSet {
    pub base: Parabola,
    /// `(n, λ_n)` pairs in increasing `n`.
    pub shifts: Vec<(u32, f64)>,
}

impl SpectrumSet {
    pub fn new(base: Parabola, dim: u32, orders: impl IntoIterator<Item = u32>) -> Self {
        let mut shifts: Vec<(u32, f64)> = orders.into_iter().map(|n| (n, lambda_n(dim, n))).collect();
        shifts.sort_by_key(|s| s.0);
        shifts.dedup_by_key(|s| s.0);
        SpectrumSet { base, shifts }
    }
}

/// Distance from `z` to a spectrum union and the mode attaining it
/// (smallest `n` on ties).
pub fn spectrum_distance(z: C64, spec: &SpectrumSet) -> (f64, u32) {
    let mut best = (f64::INFINITY, 0);
    for &(n, lam) in &spec.shifts {
        let d = dist_numeric(z + lam, &spec.base).distance;
        if d < best.0 {
            best = (d, n);
        }
    }
    best
}

/// `‖(λ − Γ)⁻¹‖_p` for `Γ = |x|²Δ + c x·∇` acting on radial functions.
///
/// With `μ = λ + ω_p` and `κ` half the drift of the transformed operator the
/// norm is `1/|μ|` whenever `μ ≥ −κ²` (every `p`) or `μ ≥ −2κ²` (`p = 2`).
pub fn resolvent_norm_gamma(lambda: f64, dim: u32, p: Exponent, c: f64) -> Result<f64> {
    let n = dim as f64;
    let mu = lambda + omega_p(dim, p, c);
    let kappa = 0.5 * (n * (1.0 - 2.0 * p.inv()) - 2.0 + c);
    let k2 = kappa * kappa;
    let inside = mu >= -k2 || (p.is_two() && mu >= -2.0 * k2);
    if !inside || mu == 0.0 {
        return Err(Error::OutsideRegime(format!(
            "λ + ω_p = {mu} below the threshold −κ² = {}",
            -k2
        )));
    }
    Ok(1.0 / mu.abs())
}

/// `‖(λ − B)⁻¹‖_p` for `B = D² + 2bD` on `L^p(ℝ)` with `p ∈ {1, ∞}` and
/// `λ = −b² − γ² < −b²`: `(b² + γ²)⁻¹ coth(|b|π/(2γ))`.
pub fn resolvent_norm_endpoint(lambda: f64, b: f64) -> Result<f64> {
    if b == 0.0 {
        return Err(Error::Domain("drift must be nonzero".into()));
    }
    if lambda >= -b * b {
        return Err(Error::Domain(format!("λ = {lambda} is not below −b² = {}", -b * b)));
    }
    let g = (-lambda - b * b).sqrt();
    let x = b.abs() * std::f64::consts::PI / (2.0 * g);
    Ok(1.0 / (x.tanh() * (b * b + g * g)))
}

/// Resolvent norm of `B = D² + 2bD` at real `λ`, exact or a Riesz–Thorin bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ResolventBound {
    pub value: f64,
    pub exact: bool,
}

/// `‖(λ − B)⁻¹‖_p`: exact `1/|λ|` for `λ ≥ −b²`; below the threshold exact at
/// `p ∈ {1, 2, ∞}` and interpolated between them otherwise.
pub fn resolvent_norm_interpolated(lambda: f64, b: f64, p: Exponent) -> Result<ResolventBound> {
    if lambda == 0.0 {
        return Err(Error::Domain("λ = 0 lies in the spectrum".into()));
    }
    if lambda >= -b * b {
        return Ok(ResolventBound { value: 1.0 / lambda.abs(), exact: true });
    }
    let endpoint = resolvent_norm_endpoint(lambda, b)?;
    let l2 = 1.0 / dist_to_parabola_closed(lambda, b).sqrt();
    let t = p.inv();
    let (value, exact) = if t >= 0.5 {
        // 1/p = (1−θ)·1 + θ/2
        let theta = 2.0 * (1.0 - t);
        (endpoint.powf(1.0 - theta) * l2.powf(theta), theta == 0.0 || theta == 1.0)
    } else {
        let theta = 2.0 * t;
        (endpoint.powf(1.0 - theta) * l2.powf(theta), theta == 0.0 || theta == 1.0)
    };
    Ok(ResolventBound { value, exact })
}

fn kernel_roots(b: f64, lambda: f64) -> Result<(f64, f64)> {
    if !(b > 0.0 && lambda < 0.0 && lambda > -b * b) {
        return Err(Error::Domain(format!("need b > 0 and −b² < λ < 0, got b = {b}, λ = {lambda}")));
    }
    let r = (b * b + lambda).sqrt();
    Ok((-b + r, -b - r))
}

/// Kernel of `(λ − D² − 2bD)⁻¹` on the line; zero for `s > t`, negative otherwise.
pub fn kernel_k(t: f64, s: f64, b: f64, lambda: f64) -> Result<f64> {
    let (m1, m2) = kernel_roots(b, lambda)?;
    if s > t {
        return Ok(0.0);
    }
    let d = t - s;
    Ok(((m1 * d).exp() - (m2 * d).exp()) / (m2 - m1))
}

/// Samples `values[i]` at `t0 + i·h`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridFunction {
    pub t0: f64,
    pub h: f64,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn sample(t0: f64, h: f64, len: usize, f: impl Fn(f64) -> f64) -> Self {
        GridFunction { t0, h, values: (0..len).map(|i| f(t0 + h * i as f64)).collect() }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

// (e^x − 1)/x and (e^x − 1 − x)/x²
fn phi1(x: f64) -> f64 {
    if x.abs() < 1e-5 {
        1.0 + x / 2.0 + x * x / 6.0
    } else {
        x.exp_m1() / x
    }
}

fn phi2(x: f64) -> f64 {
    if x.abs() < 1e-3 {
        0.5 + x / 6.0 + x * x / 24.0 + x * x * x / 120.0
    } else {
        (x.exp_m1() - x) / (x * x)
    }
}

/// `u = ∫K(·, s) f(s) ds` with `f` linearly interpolated; each cell is
/// integrated against the exact exponential antiderivative.
pub fn apply_kernel(f: &GridFunction, b: f64, lambda: f64) -> Result<GridFunction> {
    let (m1, m2) = kernel_roots(b, lambda)?;
    let h = f.h;
    let step = |mu: f64| {
        let e = (mu * h).exp();
        let c0 = h * phi1(mu * h);
        let c1 = h * phi2(mu * h);
        (e, c0, c1)
    };
    let (e1, a1, b1) = step(m1);
    let (e2, a2, b2) = step(m2);
    let mut i1 = 0.0;
    let mut i2 = 0.0;
    let mut out = Vec::with_capacity(f.values.len());
    out.push(0.0);
    for w in f.values.windows(2) {
        let slope = w[1] - w[0];
        // ∫_0^h e^{μ(h−τ)}(f₀ + slope·τ/h) dτ = f₀·h·φ₁ + slope·h·φ₂
        i1 = e1 * i1 + w[0] * a1 + slope * b1;
        i2 = e2 * i2 + w[0] * a2 + slope * b2;
        out.push((i1 - i2) / (m2 - m1));
    }
    let u = GridFunction { t0: f.t0, h, values: out };
    let residual = kernel_residual(f, &u, b, lambda);
    let target = 1e-6 * f.sup_norm().max(f64::MIN_POSITIVE);
    if residual > target && f.sup_norm() > 0.0 {
        return Err(Error::GridTooCoarse { residual, target });
    }
    Ok(u)
}

/// `max_i |λu − u″ − 2bu′ − f|` with centred differences at interior nodes.
pub fn kernel_residual(f: &GridFunction, u: &GridFunction, b: f64, lambda: f64) -> f64 {
    let h = f.h;
    let v = &u.values;
    (1..v.len().saturating_sub(1))
        .map(|i| {
            let d2 = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h);
            let d1 = (v[i + 1] - v[i - 1]) / (2.0 * h);
            (lambda * v[i] - d2 - 2.0 * b * d1 - f.values[i]).abs()
        })
        .fold(0.0, f64::max)
}
