//! Operator norms of small dense matrices and of their Kronecker products.

use serde::Serialize;

use crate::error::{Error, Result};

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols || rows == 0 || cols == 0 {
            return Err(Error::InvalidParams(format!("{} entries do not form a {rows}x{cols} matrix", data.len())));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidParams("ragged rows".into()));
        }
        Matrix::new(rows.len(), cols, rows.concat())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn kron(&self, other: &Matrix) -> Matrix {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut data = vec![0.0; r * c];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        data[(i * other.rows + k) * c + j * other.cols + l] = a * other.get(k, l);
                    }
                }
            }
        }
        Matrix { rows: r, cols: c, data }
    }

    fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j) * x[j]).sum()).collect()
    }

    fn tmul_vec(&self, y: &[f64]) -> Vec<f64> {
        (0..self.cols).map(|j| (0..self.rows).map(|i| self.get(i, j) * y[i]).sum()).collect()
    }
}

/// The three exponents with a closed description of the operator norm.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NormKind {
    One,
    Two,
    Inf,
}

impl std::str::FromStr for NormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1" => Ok(NormKind::One),
            "2" => Ok(NormKind::Two),
            "inf" | "∞" => Ok(NormKind::Inf),
            other => Err(Error::InvalidParams(format!("operator norm '{other}' not supported"))),
        }
    }
}

/// Largest singular value by power iteration on `GᵀG`.
fn spectral_norm(g: &Matrix) -> Result<f64> {
    let mut x: Vec<f64> = (0..g.cols).map(|j| 1.0 + 0.1 * j as f64).collect();
    let mut last = 0.0;
    for _ in 0..100_000 {
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Ok(0.0);
        }
        x.iter_mut().for_each(|v| *v /= norm);
        let y = g.tmul_vec(&g.mul_vec(&x));
        // Rayleigh quotient of GᵀG at the unit vector x
        let rayleigh: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        if (rayleigh - last).abs() <= 1e-15 * rayleigh.abs() {
            return Ok(rayleigh.max(0.0).sqrt());
        }
        last = rayleigh;
        x = y;
    }
    Err(Error::NonConvergence("power iteration stalled".into()))
}

pub fn operator_norm(g: &Matrix, kind: NormKind) -> Result<f64> {
    match kind {
        NormKind::One => Ok((0..g.cols)
            .map(|j| (0..g.rows).map(|i| g.get(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max)),
        NormKind::Inf => Ok((0..g.rows)
            .map(|i| (0..g.cols).map(|j| g.get(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max)),
        NormKind::Two => spectral_norm(g),
    }
}

/// `(‖T ⊗ S‖, ‖T‖·‖S‖)`.
pub fn tensor_norm_check(t: &Matrix, s: &Matrix, kind: NormKind) -> Result<(f64, f64)> {
    if t.rows.max(t.cols).max(s.rows).max(s.cols) > 8 {
        return Err(Error::InvalidParams("factors are limited to 8x8".into()));
    }
    let lhs = operator_norm(&t.kron(s), kind)?;
    Ok((lhs, operator_norm(t, kind)? * operator_norm(s, kind)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn scalar_factors() {
        let t = Matrix::new(1, 1, vec![2.0]).unwrap();
        let s = Matrix::new(1, 1, vec![3.0]).unwrap();
        for kind in [NormKind::One, NormKind::Two, NormKind::Inf] {
            assert_eq!(tensor_norm_check(&t, &s, kind).unwrap(), (6.0, 6.0));
        }
    }

    #[test]
    fn kron_layout() {
        let t = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let s = Matrix::from_rows(&[vec![0.0, 5.0], vec![6.0, 7.0]]).unwrap();
        let k = t.kron(&s);
        assert_eq!(k.get(0, 1), 5.0);
        assert_eq!(k.get(1, 2), 12.0);
        assert_eq!(k.get(3, 3), 28.0);
    }

    #[test]
    fn known_norms() {
        let g = Matrix::from_rows(&[vec![1.0, -2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(operator_norm(&g, NormKind::One).unwrap(), 6.0);
        assert_eq!(operator_norm(&g, NormKind::Inf).unwrap(), 7.0);
        // singular values of [[1,-2],[3,4]]: squares solve x² − 30x + 100 = 0
        assert_relative_eq!(operator_norm(&g, NormKind::Two).unwrap(), (15.0 + 125f64.sqrt()).sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn rejects_large_factors() {
        let big = Matrix::new(9, 1, vec![1.0; 9]).unwrap();
        assert!(tensor_norm_check(&big, &big, NormKind::One).is_err());
    }
}
