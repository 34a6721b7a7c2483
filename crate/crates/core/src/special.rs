//! Log-gamma, sphere areas and the `C^∞` bump/smoothstep pair used by every cutoff.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::quadrature::gauss_legendre;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0` (Lanczos, reflected below 1/2).
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma requires a positive argument");
    if x < 0.5 {
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let z = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

pub fn gamma(x: f64) -> f64 {
    ln_gamma(x).exp()
}

/// Surface measure `|S_{N-1}| = 2π^{N/2}/Γ(N/2)`; `|S_0| = 2`.
pub fn sphere_area(dim: u32) -> f64 {
    let h = dim as f64 / 2.0;
    2.0 * PI.powf(h) / gamma(h)
}

/// `B(t) = exp(−1/(1−t²))` on `|t| < 1`, zero elsewhere.
pub fn bump(t: f64) -> f64 {
    if t.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - t * t)).exp()
    }
}

/// `(B, B', B'')` at `t`.
pub fn bump_jet(t: f64) -> (f64, f64, f64) {
    if t.abs() >= 1.0 {
        return (0.0, 0.0, 0.0);
    }
    let q = 1.0 - t * t;
    let b = (-1.0 / q).exp();
    // B' = B·g with g = −2t/q²
    let g = -2.0 * t / (q * q);
    let dg = -2.0 / (q * q) - 8.0 * t * t / (q * q * q);
    (b, b * g, b * (g * g + dg))
}

struct StepTable {
    h: f64,
    values: Vec<f64>,
    mass: f64,
}

const STEP_CELLS: usize = 2048;

fn step_table() -> &'static StepTable {
    static TABLE: OnceLock<StepTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let (x, w) = gauss_legendre(16);
        let h = 2.0 / STEP_CELLS as f64;
        let mut values = Vec::with_capacity(STEP_CELLS + 1);
        let mut acc = 0.0;
        values.push(0.0);
        for j in 0..STEP_CELLS {
            let a = -1.0 + j as f64 * h;
            let mut cell = 0.0;
            for (xi, wi) in x.iter().zip(&w) {
                cell += wi * bump(a + 0.5 * h * (xi + 1.0));
            }
            acc += 0.5 * h * cell;
            values.push(acc);
        }
        let mass = acc;
        for v in values.iter_mut() {
            *v /= mass;
        }
        StepTable { h, values, mass }
    })
}

/// `∫_{−1}^{1} B`.
pub fn bump_mass() -> f64 {
    step_table().mass
}

/// Smoothstep `S(t) = ∫_{−1}^t B / ∫_{−1}^1 B` with its first two derivatives.
pub fn smoothstep_jet(t: f64) -> (f64, f64, f64) {
    if t <= -1.0 {
        return (0.0, 0.0, 0.0);
    }
    if t >= 1.0 {
        return (1.0, 0.0, 0.0);
    }
    let tab = step_table();
    let (b0, db0, _) = bump_jet(t);
    let s1 = b0 / tab.mass;
    let s2 = db0 / tab.mass;
    // quintic Hermite between table nodes; endpoint derivatives are exact
    let pos = (t + 1.0) / tab.h;
    let j = (pos.floor() as usize).min(STEP_CELLS - 1);
    let u = pos - j as f64;
    let (a, b) = (-1.0 + j as f64 * tab.h, -1.0 + (j + 1) as f64 * tab.h);
    let (ba, da, _) = bump_jet(a);
    let (bb, db, _) = bump_jet(b);
    let m = tab.mass;
    let h = tab.h;
    let (y0, y1) = (tab.values[j], tab.values[j + 1]);
    let (p0, p1) = (ba / m, bb / m);
    let (q0, q1) = (da / m, db / m);
    let u2 = u * u;
    let u3 = u2 * u;
    let u4 = u3 * u;
    let u5 = u4 * u;
    let h0 = 1.0 - 10.0 * u3 + 15.0 * u4 - 6.0 * u5;
    let h1 = u - 6.0 * u3 + 8.0 * u4 - 3.0 * u5;
    let h2 = 0.5 * u2 - 1.5 * u3 + 1.5 * u4 - 0.5 * u5;
    let h3 = 10.0 * u3 - 15.0 * u4 + 6.0 * u5;
    let h4 = -4.0 * u3 + 7.0 * u4 - 3.0 * u5;
    let h5 = 0.5 * u3 - u4 + 0.5 * u5;
    let s = y0 * h0 + h * p0 * h1 + h * h * q0 * h2 + y1 * h3 + h * p1 * h4 + h * h * q1 * h5;
    (s, s1, s2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ln_gamma_reference_values() {
        // high-precision references
        let cases = [
            (0.02, 3.900_804_516_098_375_951),
            (0.1, 2.252_712_651_734_205_902),
            (0.5, 0.572_364_942_924_700_087),
            (1.5, -0.120_782_237_635_245_222),
            (3.7, 1.428_072_326_665_388_129),
            (7.25, 7.052_185_450_738_539_445),
            (10.0, 12.801_827_480_081_469_611),
        ];
        for (x, want) in cases {
            assert!((ln_gamma(x) - want).abs() < 1e-12, "x = {x}");
        }
        assert_relative_eq!(gamma(5.0), 24.0, max_relative = 1e-13);
        assert_relative_eq!(gamma(0.5), PI.sqrt(), max_relative = 1e-13);
    }

    #[test]
    fn sphere_areas() {
        assert_relative_eq!(sphere_area(2), 2.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(sphere_area(3), 4.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(sphere_area(4), 2.0 * PI * PI, max_relative = 1e-14);
    }

    #[test]
    fn smoothstep_matches_reference() {
        assert_relative_eq!(bump_mass(), 0.443_993_816_168_079_437_8, max_relative = 1e-14);
        let cases = [
            (-0.9, 0.000_172_785_829_805_924_508_6),
            (-0.5, 0.122_967_283_277_329_078_1),
            (0.0, 0.5),
            (0.3, 0.740_907_974_643_807_978_7),
            (0.77, 0.988_216_517_955_210_744_3),
        ];
        for (t, want) in cases {
            assert!((smoothstep_jet(t).0 - want).abs() < 1e-13, "t = {t}");
        }
    }

    #[test]
    fn smoothstep_derivatives_are_consistent() {
        let h = 1e-5;
        for &t in &[-0.8, -0.31, 0.05, 0.42, 0.9] {
            let (_, d1, d2) = smoothstep_jet(t);
            let fd1 = (smoothstep_jet(t + h).0 - smoothstep_jet(t - h).0) / (2.0 * h);
            let fd2 = (smoothstep_jet(t + h).1 - smoothstep_jet(t - h).1) / (2.0 * h);
            assert!((d1 - fd1).abs() < 1e-8);
            assert!((d2 - fd2).abs() < 1e-7);
        }
    }

    #[test]
    fn bump_jet_derivatives() {
        let h = 1e-5;
        for &t in &[-0.7, 0.0, 0.33, 0.8] {
            let (_, d1, d2) = bump_jet(t);
            assert!((d1 - (bump(t + h) - bump(t - h)) / (2.0 * h)).abs() < 1e-8);
            assert!((d2 - (bump_jet(t + h).1 - bump_jet(t - h).1) / (2.0 * h)).abs() < 1e-7);
        }
    }
}
