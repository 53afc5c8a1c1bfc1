//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use ellipcmr::field::{Jet, SmoothField};
use ellipcmr::{Result, C64};

/// Monomial symmetric function `m_(a,b)(z1, z2)`.
pub fn m2(a: i64, b: i64, z: [C64; 2]) -> C64 {
    if a == b {
        (z[0] * z[1]).powi(a as i32)
    } else {
        z[0].powi(a as i32) * z[1].powi(b as i32) + z[0].powi(b as i32) * z[1].powi(a as i32)
    }
}

/// Two-variable Jack polynomial `P_(a,b)` with parameter `1/g`, by
/// Gram-Schmidt of monomial symmetric functions in decreasing dominance,
/// against `|1 - z1/z2|^{2g}` on an equispaced torus grid.
pub fn jack2(a: i64, b: i64, g: f64, z: [C64; 2]) -> C64 {
    let m = 48usize;
    let pts: Vec<[C64; 2]> = (0..m * m)
        .map(|k| {
            let t1 = 2.0 * std::f64::consts::PI * (k / m) as f64 / m as f64;
            let t2 = 2.0 * std::f64::consts::PI * (k % m) as f64 / m as f64;
            [C64::from_polar(1.0, t1), C64::from_polar(1.0, t2)]
        })
        .collect();
    let w: Vec<f64> = pts.iter().map(|q| (C64::new(1.0, 0.0) - q[0] / q[1]).norm().powf(2.0 * g)).collect();
    let d = a + b;
    // lower partitions (d - j, j) with j > b, lowest first
    let lower: Vec<(i64, i64)> = ((b + 1)..=d / 2).rev().map(|j| (d - j, j)).collect();
    // coefficients of each orthogonal polynomial in the monomial basis
    let mut basis: Vec<Vec<(i64, i64, C64)>> = Vec::new();
    let eval = |poly: &[(i64, i64, C64)], q: [C64; 2]| -> C64 { poly.iter().map(|&(x, y, c)| c * m2(x, y, q)).sum() };
    let inner = |f: &[(i64, i64, C64)], h: &[(i64, i64, C64)]| -> C64 {
        pts.iter().zip(&w).map(|(&q, &wt)| eval(f, q) * eval(h, q).conj() * wt).sum::<C64>()
    };
    for &(x, y) in lower.iter().chain(core::iter::once(&(a, b))) {
        let mut poly = vec![(x, y, C64::new(1.0, 0.0))];
        for prev in &basis {
            let coef = inner(&poly, prev) / inner(prev, prev);
            for &(u, v, c) in prev {
                poly.push((u, v, -coef * c));
            }
        }
        basis.push(poly);
    }
    eval(basis.last().unwrap(), z)
}

/// Schur polynomial `s_(a,b)` as a ratio of alternants.
pub fn schur2(a: i64, b: i64, z: [C64; 2]) -> C64 {
    let num = z[0].powi(a as i32 + 1) * z[1].powi(b as i32) - z[1].powi(a as i32 + 1) * z[0].powi(b as i32);
    num / (z[0] - z[1])
}

/// Complete homogeneous symmetric polynomial `h_d(z1, z2)`.
pub fn h2(d: i64, z: [C64; 2]) -> C64 {
    (0..=d).map(|j| z[0].powi(j as i32) * z[1].powi((d - j) as i32)).sum()
}

/// Least-squares `alpha` with `f ~ alpha h`, and `max |f - alpha h| / max |f|`.
pub fn proportionality(f: &[C64], h: &[C64]) -> (C64, f64) {
    let num: C64 = f.iter().zip(h).map(|(a, b)| a * b.conj()).sum();
    let den: f64 = h.iter().map(|b| b.norm_sqr()).sum();
    let alpha = num / den;
    let scale = f.iter().fold(0.0f64, |m, a| m.max(a.norm()));
    let res = f.iter().zip(h).fold(0.0f64, |m, (a, b)| m.max((a - alpha * b).norm()));
    (alpha, res / scale)
}

/// `sin(x)^a cos(x)^b`, an eigenfunction of the Poschl-Teller operator
/// `-d^2 + a(a-1)/sin^2 + b(b-1)/cos^2` with eigenvalue `(a+b)^2`.
pub struct PoschlTeller {
    pub a: f64,
    pub b: f64,
}

impl SmoothField for PoschlTeller {
    fn dim(&self) -> usize {
        1
    }
    fn value(&self, x: &[C64]) -> Result<C64> {
        Ok(x[0].sin().powf(self.a) * x[0].cos().powf(self.b))
    }
    fn analytic_jet(&self, x: &[C64]) -> Option<Result<Jet>> {
        let v = self.value(x).ok()?;
        let (s, c) = (x[0].sin(), x[0].cos());
        let l1 = c / s * self.a - s / c * self.b;
        let l2 = -(s * s).inv() * self.a - (c * c).inv() * self.b;
        Some(Ok(Jet::from_log(v, &[l1], &[l2])))
    }
}

pub fn cx(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}
