//! Spherical harmonics on `S^{N−1}`: zonal functions for every `N`, full real
//! bases for `N = 2, 3`, product quadrature and projections.

use std::f64::consts::PI;

use serde::Serialize;

use crate::constants::{harmonic_dim, lambda_n};
use crate::error::{Error, Result};
use crate::params::Exponent;
use crate::quadrature::{gauss_gegenbauer, gauss_legendre};
use crate::special::{ln_gamma, sphere_area};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HarmonicIndex {
    pub n: u32,
    /// In `[0, d_n)`.
    pub m: u32,
}

impl HarmonicIndex {
    pub fn new(dim: u32, n: u32, m: u32) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParams("harmonics need N >= 2".into()));
        }
        if (m as u128) >= harmonic_dim(dim, n) {
            return Err(Error::InvalidParams(format!("multiplicity index {m} out of range for order {n}")));
        }
        Ok(HarmonicIndex { n, m })
    }

    /// The harmonic invariant under rotations fixing the last axis. For
    /// `N = 2` no such harmonic exists past order zero and `cos nθ` is returned.
    pub fn zonal(dim: u32, n: u32) -> Self {
        HarmonicIndex { n, m: if dim == 3 { n } else { 0 } }
    }
}

/// Point on the sphere by polar angle from the last axis and, for `N = 3`,
/// azimuth. For `N = 2` the single angle is measured from the first axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpherePoint {
    pub theta: f64,
    pub phi: f64,
}

/// Product quadrature on `S^{N−1}`; for `N ≥ 4` only zonal integrands are
/// resolved and the azimuthal directions are integrated out analytically.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SphereGrid {
    pub dim: u32,
    pub points: Vec<SpherePoint>,
    pub weights: Vec<f64>,
}

impl SphereGrid {
    /// Exact for harmonics of order below `order`.
    pub fn new(dim: u32, order: usize) -> Result<Self> {
        let order = order.max(2);
        let (points, weights) = match dim {
            0 | 1 => return Err(Error::InvalidParams("sphere grids need N >= 2".into())),
            2 => {
                let m = 2 * order;
                let h = 2.0 * PI / m as f64;
                ((0..m).map(|j| SpherePoint { theta: h * j as f64, phi: 0.0 }).collect(), vec![h; m])
            }
            3 => {
                let (x, w) = gauss_legendre(order);
                let m = 2 * order;
                let h = 2.0 * PI / m as f64;
                let mut pts = Vec::with_capacity(x.len() * m);
                let mut wts = Vec::with_capacity(x.len() * m);
                for (xi, wi) in x.iter().zip(&w) {
                    for j in 0..m {
                        pts.push(SpherePoint { theta: xi.acos(), phi: h * j as f64 });
                        wts.push(wi * h);
                    }
                }
                (pts, wts)
            }
            _ => {
                // (1 − x²)^{(N−3)/2} carries the sin^{N−2}θ surface factor
                let (x, w) = gauss_gegenbauer(order, (dim as f64 - 3.0) / 2.0);
                let ring = sphere_area(dim - 1);
                (
                    x.iter().map(|xi| SpherePoint { theta: xi.acos(), phi: 0.0 }).collect(),
                    w.iter().map(|wi| wi * ring).collect(),
                )
            }
        };
        Ok(SphereGrid { dim, points, weights })
    }

    pub fn sample(&self, f: impl Fn(SpherePoint) -> f64) -> Vec<f64> {
        self.points.iter().map(|&p| f(p)).collect()
    }

    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }
}

/// Gegenbauer `C_n^{(N−2)/2}(cos θ)`; `cos nθ` when `N = 2`.
pub fn eval_zonal(dim: u32, n: u32, theta: f64) -> f64 {
    if dim == 2 {
        return (n as f64 * theta).cos();
    }
    let lam = (dim as f64 - 2.0) / 2.0;
    let x = theta.cos();
    let (mut prev, mut cur) = (1.0, 2.0 * lam * x);
    if n == 0 {
        return prev;
    }
    for k in 2..=n {
        let k = k as f64;
        let next = (2.0 * x * (k + lam - 1.0) * cur - (k + 2.0 * lam - 2.0) * prev) / k;
        prev = cur;
        cur = next;
    }
    cur
}

/// `∫_{S^{N−1}} |eval_zonal|² dσ`.
pub fn zonal_norm_sq(dim: u32, n: u32) -> f64 {
    if dim == 2 {
        return if n == 0 { 2.0 * PI } else { PI };
    }
    let lam = (dim as f64 - 2.0) / 2.0;
    let nf = n as f64;
    let ln = PI.ln() + (1.0 - 2.0 * lam) * 2f64.ln() + ln_gamma(nf + 2.0 * lam)
        - ln_gamma(nf + 1.0)
        - (nf + lam).ln()
        - 2.0 * ln_gamma(lam);
    sphere_area(dim - 1) * ln.exp()
}

/// Zonal harmonic with unit `L²(S^{N−1})` norm.
pub fn eval_zonal_normalized(dim: u32, n: u32, theta: f64) -> f64 {
    eval_zonal(dim, n, theta) / zonal_norm_sq(dim, n).sqrt()
}

/// Associated Legendre `P_n^m(x)` without the Condon–Shortley phase.
fn assoc_legendre(n: u32, m: u32, x: f64) -> f64 {
    let s = (1.0 - x * x).max(0.0).sqrt();
    let mut pmm = 1.0;
    for i in 0..m {
        pmm *= (2 * i + 1) as f64 * s;
    }
    if n == m {
        return pmm;
    }
    let mut pm1 = x * (2 * m + 1) as f64 * pmm;
    if n == m + 1 {
        return pm1;
    }
    let mut pm0 = pmm;
    for l in (m + 2)..=n {
        let next = ((2 * l - 1) as f64 * x * pm1 - (l + m - 1) as f64 * pm0) / (l - m) as f64;
        pm0 = pm1;
        pm1 = next;
    }
    pm1
}

/// Real orthonormal basis for `N = 2` (Fourier modes) and `N = 3` (real
/// spherical harmonics, azimuthal order `m − n`); zonal for larger `N`.
pub fn eval_basis(dim: u32, idx: HarmonicIndex, at: SpherePoint) -> Result<f64> {
    HarmonicIndex::new(dim, idx.n, idx.m)?;
    let n = idx.n;
    match dim {
        2 => {
            let t = n as f64 * at.theta;
            Ok(match (n, idx.m) {
                (0, _) => 1.0 / (2.0 * PI).sqrt(),
                (_, 0) => t.cos() / PI.sqrt(),
                _ => t.sin() / PI.sqrt(),
            })
        }
        3 => {
            let mm = idx.m as i64 - n as i64;
            let am = mm.unsigned_abs() as u32;
            let ln_ratio = ln_gamma((n - am + 1) as f64) - ln_gamma((n + am + 1) as f64);
            let norm = ((2 * n + 1) as f64 / (4.0 * PI) * ln_ratio.exp()).sqrt();
            let p = assoc_legendre(n, am, at.theta.cos());
            Ok(match mm {
                0 => norm * p,
                m if m > 0 => 2f64.sqrt() * norm * p * (am as f64 * at.phi).cos(),
                _ => 2f64.sqrt() * norm * p * (am as f64 * at.phi).sin(),
            })
        }
        _ if idx.m == 0 => Ok(eval_zonal_normalized(dim, n, at.theta)),
        _ => Err(Error::InvalidParams("only zonal harmonics are available for N >= 4".into())),
    }
}

/// `∫ u P_idx dσ` under the grid quadrature.
pub fn project_component(u: &[f64], idx: HarmonicIndex, grid: &SphereGrid) -> Result<f64> {
    if u.len() != grid.points.len() {
        return Err(Error::InvalidParams("sample count does not match the grid".into()));
    }
    let basis = grid.points.iter().map(|&pt| eval_basis(grid.dim, idx, pt)).collect::<Result<Vec<_>>>()?;
    Ok(grid.weights.iter().zip(u).zip(&basis).map(|((w, a), b)| w * a * b).sum())
}

pub fn pnorm_on_sphere(u: &[f64], p: Exponent, grid: &SphereGrid) -> Result<f64> {
    if u.len() != grid.points.len() {
        return Err(Error::InvalidParams("sample count does not match the grid".into()));
    }
    Ok(match p {
        Exponent::Infinite => u.iter().fold(0.0, |m, v| m.max(v.abs())),
        Exponent::Finite(p) => grid.integrate(&u.iter().map(|v| v.abs().powf(p)).collect::<Vec<_>>()).powf(1.0 / p),
    })
}

/// Whether the basis function changes sign under `ω_N ↦ −ω_N`; these
/// survive odd reflection across the boundary of the half-space.
pub fn is_odd_in_last_coordinate(idx: HarmonicIndex, dim: u32) -> bool {
    match dim {
        2 => idx.n > 0 && idx.m == 1,
        3 => (idx.n as i64 + (idx.m as i64 - idx.n as i64).abs()) % 2 == 1,
        _ => idx.n % 2 == 1,
    }
}

/// Number of basis functions the module constructs for order `n`.
pub fn basis_count(dim: u32, n: u32) -> u128 {
    match dim {
        2 | 3 => harmonic_dim(dim, n),
        _ => 1,
    }
}

/// `max |Δ₀ₕ P + λ_n P|` over `θ ∈ [0.2, π − 0.2]` with centred differences
/// of step `h`, applied to the zonal polar part `P'' + (N−2) cot θ P'`.
pub fn zonal_eigen_residual(dim: u32, n: u32, h: f64) -> f64 {
    let lam = lambda_n(dim, n);
    let (lo, hi) = (0.2, PI - 0.2);
    let steps = 400;
    (0..=steps)
        .map(|i| {
            let t = lo + (hi - lo) * i as f64 / steps as f64;
            let (fm, f0, fp) = (eval_zonal(dim, n, t - h), eval_zonal(dim, n, t), eval_zonal(dim, n, t + h));
            let d2 = (fp - 2.0 * f0 + fm) / (h * h);
            let d1 = (fp - fm) / (2.0 * h);
            let cot = if dim == 2 { 0.0 } else { t.cos() / t.sin() };
            (d2 + (dim as f64 - 2.0) * cot * d1 + lam * f0).abs()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn grids_reproduce_sphere_area() {
        for dim in 2..=7 {
            let g = SphereGrid::new(dim, 12).unwrap();
            assert_relative_eq!(g.integrate(&vec![1.0; g.points.len()]), sphere_area(dim), max_relative = 1e-12);
        }
    }

    #[test]
    fn zonal_seeds() {
        assert_eq!(eval_zonal(5, 0, 0.3), 1.0);
        assert_relative_eq!(eval_zonal(3, 1, 0.7), 0.7f64.cos(), max_relative = 1e-15);
        assert_relative_eq!(eval_zonal(2, 3, 0.7), 2.1f64.cos(), max_relative = 1e-15);
    }

    #[test]
    fn zonal_norms_match_quadrature() {
        for dim in 2..=6 {
            let g = SphereGrid::new(dim, 16).unwrap();
            for n in 0..6 {
                let v = g.sample(|pt| eval_zonal(dim, n, pt.theta).powi(2));
                assert_relative_eq!(g.integrate(&v), zonal_norm_sq(dim, n), max_relative = 1e-11);
            }
        }
    }

    #[test]
    fn sphere_norm_examples() {
        let g = SphereGrid::new(3, 10).unwrap();
        let one = vec![1.0; g.points.len()];
        assert_relative_eq!(pnorm_on_sphere(&one, Exponent::Finite(3.0), &g).unwrap(), (4.0 * PI).powf(1.0 / 3.0), max_relative = 1e-12);
        assert_eq!(pnorm_on_sphere(&one, Exponent::Infinite, &g).unwrap(), 1.0);
        let u = g.sample(|pt| pt.theta.cos());
        assert_relative_eq!(pnorm_on_sphere(&u, Exponent::Finite(2.0), &g).unwrap(), (4.0 * PI / 3.0).sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn projection_recovers_coefficients() {
        let g = SphereGrid::new(3, 12).unwrap();
        let terms = [(HarmonicIndex { n: 0, m: 0 }, 0.5), (HarmonicIndex { n: 2, m: 3 }, -1.25), (HarmonicIndex { n: 4, m: 0 }, 2.0)];
        let u = g.sample(|pt| terms.iter().map(|(i, a)| a * eval_basis(3, *i, pt).unwrap()).sum());
        for (i, a) in terms {
            assert!((project_component(&u, i, &g).unwrap() - a).abs() < 1e-10);
        }
        assert!(project_component(&u, HarmonicIndex { n: 3, m: 1 }, &g).unwrap().abs() < 1e-10);
    }

    #[test]
    fn parity_classification() {
        assert!(is_odd_in_last_coordinate(HarmonicIndex { n: 3, m: 1 }, 2));
        assert!(!is_odd_in_last_coordinate(HarmonicIndex { n: 3, m: 0 }, 2));
        assert!(!is_odd_in_last_coordinate(HarmonicIndex::zonal(2, 0), 2));
        assert!(!is_odd_in_last_coordinate(HarmonicIndex::zonal(3, 0), 3));
        assert!(is_odd_in_last_coordinate(HarmonicIndex { n: 1, m: 1 }, 3));
    }

    #[test]
    fn multiplicity_bounds() {
        assert!(HarmonicIndex::new(3, 2, 4).is_ok());
        assert!(HarmonicIndex::new(3, 2, 5).is_err());
        assert!(HarmonicIndex::new(2, 0, 1).is_err());
    }
}
