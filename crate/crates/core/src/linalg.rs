//! Dense complex linear algebra for the handful of small systems we need.

use crate::prelude::*;

/// Row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<C64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat { rows, cols, data: vec![c(0.0); rows * cols] }
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn adjoint(&self) -> CMat {
        let mut out = CMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn mul(&self, other: &CMat) -> CMat {
        let mut out = CMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j]).sum()).collect()
    }
}

/// Solve `a x = b` by Gaussian elimination with partial pivoting.
pub fn solve(a: &CMat, b: &[C64]) -> Result<Vec<C64>> {
    let n = a.rows;
    if a.cols != n || b.len() != n {
        return Err(Error::InvalidInput("solve needs a square system"));
    }
    let mut m = a.data.clone();
    let mut x = b.to_vec();
    let scale = m.iter().fold(0.0f64, |s, v| s.max(v.norm())).max(1e-300);
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i * n + col].norm().total_cmp(&m[j * n + col].norm()))
            .unwrap_or(col);
        if m[piv * n + col].norm() <= 1e-14 * scale {
            return Err(Error::Singular);
        }
        if piv != col {
            for j in 0..n {
                m.swap(piv * n + j, col * n + j);
            }
            x.swap(piv, col);
        }
        let d = m[col * n + col];
        for i in col + 1..n {
            let f = m[i * n + col] / d;
            if f == c(0.0) {
                continue;
            }
            for j in col..n {
                let t = m[col * n + j];
                m[i * n + j] -= f * t;
            }
            let t = x[col];
            x[i] -= f * t;
        }
    }
    for i in (0..n).rev() {
        let mut s = x[i];
        for j in i + 1..n {
            s -= m[i * n + j] * x[j];
        }
        x[i] = s / m[i * n + i];
    }
    Ok(x)
}

/// Minimum-norm solution of an underdetermined system with full row rank:
/// `x = a^H (a a^H)^-1 b`.
pub fn min_norm_solve(a: &CMat, b: &[C64]) -> Result<Vec<C64>> {
    let ah = a.adjoint();
    let y = solve(&a.mul(&ah), b)?;
    Ok(ah.mul_vec(&y))
}
