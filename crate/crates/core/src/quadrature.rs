//! Gauss rules, globally adaptive Gauss–Kronrod integration on the line and
//! log-scaled variants for integrands spanning many orders of magnitude.

use serde::Serialize;

use crate::error::{Error, Result};

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d.is_finite() {
            dp = d;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Gauss rule for the weight `(1−x²)^a` on `[−1, 1]`, `a > −1`, by the
/// Golub–Welsch eigenvalue method.
pub fn gauss_gegenbauer(n: usize, a: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1 && a > -1.0);
    let lam = a + 0.5;
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    for k in 1..n {
        let kf = k as f64;
        let beta = if lam.abs() < 1e-15 {
            if k == 1 {
                0.5
            } else {
                0.25
            }
        } else {
            kf * (kf + 2.0 * lam - 1.0) / (4.0 * (kf + lam) * (kf + lam - 1.0))
        };
        off[k] = beta.sqrt();
    }
    let mut first = vec![0.0; n];
    first[0] = 1.0;
    tridiagonal_ql(&mut diag, &mut off, &mut first);
    let mu0 = std::f64::consts::PI.sqrt() * (crate::special::ln_gamma(a + 1.0) - crate::special::ln_gamma(a + 1.5)).exp();
    let mut pairs: Vec<(f64, f64)> = diag
        .iter()
        .zip(&first)
        .map(|(&x, &v)| (x, mu0 * v * v))
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    pairs.into_iter().unzip()
}

/// Implicit QL on a symmetric tridiagonal matrix (`off[0]` unused); `first`
/// tracks the first row of the eigenvector matrix.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], first: &mut [f64]) {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter < 200, "tridiagonal QL failed to converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let t = first[i + 1];
                first[i + 1] = s * first[i] + c * t;
                first[i] = c * first[i] - s * t;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

/// Controls for adaptive integration in `s = log ρ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    /// Maximum number of bisections of an initial panel.
    pub max_depth: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { rel_tol: 1e-10, max_depth: 48 }
    }
}

impl QuadratureSpec {
    pub fn with_tol(rel_tol: f64) -> Self {
        QuadratureSpec { rel_tol, ..Default::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    abs_value: f64,
    error: f64,
    depth: u32,
}

fn kronrod_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, depth: u32) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    let mut kabs = fc.abs() * WGK[7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let (f1, f2) = (f(c - dx), f(c + dx));
        k += WGK[j] * (f1 + f2);
        kabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            g += WG[j / 2] * (f1 + f2);
        }
    }
    Panel {
        a,
        b,
        value: k * h,
        abs_value: kabs * h,
        error: ((k - g) * h).abs(),
        depth,
    }
}

/// Adaptive integral of `f` over `[lo, hi]`, seeded with panels split at
/// `breakpoints` (points outside the interval are ignored).
///
/// Refinement bisects the panel of largest error until the summed error falls
/// below `rel_tol · ∫|f|`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    breakpoints: &[f64],
    spec: &QuadratureSpec,
) -> Result<Integral> {
    if !(hi > lo) {
        return Ok(Integral { value: 0.0, error: 0.0, evaluations: 0 });
    }
    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&x| x > lo && x < hi)
        .collect();
    cuts.push(lo);
    cuts.push(hi);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|x, y| (*x - *y).abs() <= 1e-14 * (1.0 + y.abs()));
    let mut panels: Vec<Panel> = cuts
        .windows(2)
        .map(|w| kronrod_panel(&f, w[0], w[1], 0))
        .collect();
    let mut evaluations = 15 * panels.len();
    let max_panels = 20_000usize;
    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let abs_value: f64 = panels.iter().map(|p| p.abs_value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        let target = spec.rel_tol * abs_value;
        if !value.is_finite() {
            return Err(Error::NonConvergence("non-finite integrand".into()));
        }
        if error <= target || error <= f64::MIN_POSITIVE {
            return Ok(Integral { value, error, evaluations });
        }
        let worst = panels
            .iter()
            .enumerate()
            .filter(|(_, p)| p.depth < spec.max_depth)
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i);
        let Some(i) = worst else {
            return Err(Error::ToleranceNotMet { estimate: value, error, target });
        };
        if panels.len() >= max_panels {
            return Err(Error::ToleranceNotMet { estimate: value, error, target });
        }
        // panels stay ordered by position so summation order is deterministic
        let p = panels.remove(i);
        let mid = 0.5 * (p.a + p.b);
        panels.insert(i, kronrod_panel(&f, mid, p.b, p.depth + 1));
        panels.insert(i, kronrod_panel(&f, p.a, mid, p.depth + 1));
        evaluations += 30;
    }
}

/// Integral stored as its logarithm, for p-th powers that overflow `f64`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LogIntegral {
    /// `ln ∫ exp(h)`; `−∞` when the integrand vanishes identically.
    pub ln_value: f64,
    pub rel_error: f64,
    pub evaluations: usize,
}

impl LogIntegral {
    pub fn value(&self) -> f64 {
        self.ln_value.exp()
    }
}

/// Largest value of `h` over a uniform sample of `[lo, hi]` and the breakpoints.
fn sample_max<H: Fn(f64) -> f64>(h: &H, lo: f64, hi: f64, breakpoints: &[f64], samples: usize) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for i in 0..=samples {
        let s = lo + (hi - lo) * i as f64 / samples as f64;
        let v = h(s);
        if v > best {
            best = v;
        }
    }
    for &s in breakpoints {
        if s >= lo && s <= hi {
            let v = h(s);
            if v > best {
                best = v;
            }
        }
    }
    best
}

/// `ln ∫_{lo}^{hi} exp(h(s)) ds` with `h` the log of a nonnegative integrand.
pub fn integrate_log<H: Fn(f64) -> f64>(
    h: H,
    lo: f64,
    hi: f64,
    breakpoints: &[f64],
    spec: &QuadratureSpec,
) -> Result<LogIntegral> {
    let mut shift = sample_max(&h, lo, hi, breakpoints, 2000);
    if shift == f64::NEG_INFINITY {
        return Ok(LogIntegral { ln_value: f64::NEG_INFINITY, rel_error: 0.0, evaluations: 0 });
    }
    for _ in 0..4 {
        let g = |s: f64| {
            let v = h(s) - shift;
            if v.is_nan() {
                0.0
            } else {
                v.exp()
            }
        };
        let r = integrate(g, lo, hi, breakpoints, spec)?;
        if r.value.is_finite() && r.value < 1e300 {
            let ln_value = if r.value > 0.0 { r.value.ln() + shift } else { f64::NEG_INFINITY };
            let rel_error = if r.value > 0.0 { r.error / r.value } else { 0.0 };
            return Ok(LogIntegral { ln_value, rel_error, evaluations: r.evaluations });
        }
        shift += 600.0;
    }
    Err(Error::NonConvergence("log-scaled integrand overflowed".into()))
}

/// Supremum of `h` over `[lo, hi]` by dense sampling plus golden-section
/// polishing around the leading samples.
pub fn sup_log<H: Fn(f64) -> f64>(h: H, lo: f64, hi: f64, breakpoints: &[f64]) -> f64 {
    let samples = 8000;
    let step = (hi - lo) / samples as f64;
    let mut vals: Vec<(f64, f64)> = (0..=samples)
        .map(|i| {
            let s = lo + step * i as f64;
            (s, h(s))
        })
        .collect();
    for &s in breakpoints {
        if s >= lo && s <= hi {
            vals.push((s, h(s)));
        }
    }
    let mut order: Vec<usize> = (0..vals.len()).collect();
    order.sort_by(|&i, &j| vals[j].1.total_cmp(&vals[i].1));
    let mut best = vals[order[0]].1;
    for &i in order.iter().take(8) {
        let s0 = vals[i].0;
        let (a, b) = ((s0 - step).max(lo), (s0 + step).min(hi));
        let (_, v) = golden_max(&h, a, b);
        if v > best {
            best = v;
        }
    }
    best
}

/// Golden-section maximisation on `[a, b]`; returns `(argmax, max)`.
pub fn golden_max<H: Fn(f64) -> f64>(h: &H, mut a: f64, mut b: f64) -> (f64, f64) {
    const R: f64 = 0.618_033_988_749_894_9;
    let mut c = b - R * (b - a);
    let mut d = a + R * (b - a);
    let (mut fc, mut fd) = (h(c), h(d));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-15 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - R * (b - a);
            fc = h(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + R * (b - a);
            fd = h(d);
        }
    }
    if fc > fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn legendre_rule_integrates_polynomials() {
        let (x, w) = gauss_legendre(10);
        for deg in 0..20 {
            let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg)).sum();
            let want = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((got - want).abs() < 1e-14, "degree {deg}");
        }
    }

    #[test]
    fn gegenbauer_rule_matches_moments() {
        // ∫(1−x²)^a x^{2k} = B(k+1/2, a+1)
        for &a in &[0.0, 0.5, 1.0, 1.5] {
            let (x, w) = gauss_gegenbauer(12, a);
            for k in 0..10 {
                let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(2 * k)).sum();
                let kf = k as f64;
                let ln_beta = crate::special::ln_gamma(kf + 0.5) + crate::special::ln_gamma(a + 1.0)
                    - crate::special::ln_gamma(kf + a + 1.5);
                assert_relative_eq!(got, ln_beta.exp(), max_relative = 1e-12);
            }
            assert!(w.iter().all(|&w| w > 0.0));
        }
        let (x0, _) = gauss_gegenbauer(5, 0.0);
        let (x1, _) = gauss_legendre(5);
        for (a, b) in x0.iter().zip(&x1) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn adaptive_integration_of_smooth_and_peaked_functions() {
        let spec = QuadratureSpec::default();
        let r = integrate(|s: f64| (-s * s).exp(), -30.0, 30.0, &[], &spec).unwrap();
        assert_relative_eq!(r.value, std::f64::consts::PI.sqrt(), max_relative = 1e-12);
        let r = integrate(|s: f64| 1.0 / (1e-4 + s * s), -1.0, 1.0, &[0.0], &spec).unwrap();
        let want = 2.0 * (1.0f64 / 1e-2).atan() / 1e-2;
        assert_relative_eq!(r.value, want, max_relative = 1e-10);
    }

    #[test]
    fn polynomials_on_plateaus_are_exact() {
        let spec = QuadratureSpec::default();
        for deg in [0, 5, 12, 20] {
            let r = integrate(|s: f64| s.powi(deg), 0.0, 2.0, &[1.0], &spec).unwrap();
            let want = 2f64.powi(deg + 1) / (deg as f64 + 1.0);
            assert_relative_eq!(r.value, want, max_relative = 1e-12);
        }
    }

    #[test]
    fn log_integral_handles_huge_magnitudes() {
        let spec = QuadratureSpec::default();
        // ∫_0^1 e^{1000 + s} ds
        let r = integrate_log(|s: f64| 1000.0 + s, 0.0, 1.0, &[], &spec).unwrap();
        assert_relative_eq!(r.ln_value, 1000.0 + (std::f64::consts::E - 1.0).ln(), max_relative = 1e-13);
        let r = integrate_log(|_| f64::NEG_INFINITY, 0.0, 1.0, &[], &spec).unwrap();
        assert_eq!(r.ln_value, f64::NEG_INFINITY);
    }

    #[test]
    fn sup_finds_interior_maximum() {
        let v = sup_log(|s: f64| -(s - 0.123_456).powi(2), -5.0, 5.0, &[]);
        assert!(v.abs() < 1e-14);
    }
}
