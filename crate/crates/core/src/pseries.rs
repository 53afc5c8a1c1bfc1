//! Power series in the nome for the two-particle non-stationary problem.
//!
//! The unknown is `z1^s1 z2^s2 sum_{n,k} a_{n,k} u^n p^k` with `u = z1/z2`,
//! and the generalized eigenvalue is `E = (pi/l)^2 sum_k eps_k p^k`.
//! Coefficients satisfy
//! `(n(n+d) - k kappa) a_{n,k} = sum_{k'>=1} eps_{k'} a_{n,k-k'} + gamma (W a)_{n,k}`
//! with `d = s1 - s2` and `W = sum_m m (u^m + sum_nu p^{m nu} (u^m + u^-m))`.

use alloc::collections::BTreeMap;

use crate::prelude::*;

/// Which coefficient the `(0, k)` equation determines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gauge {
    /// `a_{0,k} = 0` for `k >= 1`; the equation fixes `eps_k`.
    I,
    /// `eps_k = 0` for `k >= 1`; the equation fixes `a_{0,k}`.
    II,
}

pub const RESONANCE_TOL: f64 = 1e-10;

/// Solved coefficient table. Row `k` holds `n = -k ..= n_max(k)` where
/// `n_max(k) = n_cap + K - k`, so every coefficient up to `n_cap` at the top
/// order only depends on stored entries.
#[derive(Debug, Clone, PartialEq)]
pub struct PSeriesTable {
    pub s: [f64; 2],
    pub gamma: f64,
    pub kappa: C64,
    pub k_max: usize,
    pub n_cap: usize,
    pub gauge: Gauge,
    rows: Vec<Vec<C64>>,
    pub eps: Vec<C64>,
    /// Reads of entries inside the support that were not yet filled. Always 0.
    pub unfilled_reads: usize,
}

impl PSeriesTable {
    pub fn n_max(&self, k: usize) -> i64 {
        n_max(self.n_cap, self.k_max, k)
    }

    pub fn get(&self, n: i64, k: usize) -> C64 {
        if k > self.k_max || n < -(k as i64) || n > self.n_max(k) {
            return c(0.0);
        }
        self.rows[k][(n + k as i64) as usize]
    }

    /// `(n, k, a_{n,k})` in filling order.
    pub fn entries(&self) -> impl Iterator<Item = (i64, usize, C64)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(k, row)| row.iter().enumerate().map(move |(i, &v)| (i as i64 - k as i64, k, v)))
    }

    pub fn max_abs(&self) -> f64 {
        self.entries().fold(0.0f64, |m, (_, _, v)| m.max(v.norm()))
    }

    /// `C(p) = sum_k a_{0,k} p^k`.
    pub fn constant_part(&self) -> Vec<C64> {
        (0..=self.k_max).map(|k| self.get(0, k)).collect()
    }

    /// Divide by the constant part: the result has `a_{0,k} = 0` for
    /// `k >= 1` and solves the same equation with
    /// `eps = eps + kappa p d/dp ln C`.
    pub fn divide_by_constant(&self) -> PSeriesTable {
        let cst = self.constant_part();
        let mut out = self.clone();
        for k in 0..=self.k_max {
            for i in 0..out.rows[k].len() {
                let n = i as i64 - k as i64;
                let mut v = self.get(n, k);
                for j in 1..=k {
                    let b = if n >= -((k - j) as i64) && n <= out.n_max(k - j) {
                        out.rows[k - j][(n + (k - j) as i64) as usize]
                    } else {
                        c(0.0)
                    };
                    v -= cst[j] * b;
                }
                out.rows[k][i] = v / cst[0];
            }
        }
        let d = log_derivative(&cst);
        out.eps = (0..=self.k_max).map(|k| self.eps[k] + self.kappa * d[k]).collect();
        out.gauge = Gauge::I;
        out
    }
}

fn n_max(n_cap: usize, k_max: usize, k: usize) -> i64 {
    (n_cap + k_max - k) as i64
}

/// Coefficients of `p d/dp ln C` for a series with `C_0 = 1`.
pub fn log_derivative(cst: &[C64]) -> Vec<C64> {
    let mut d = vec![c(0.0); cst.len()];
    for k in 1..cst.len() {
        let mut v = cst[k] * k as f64;
        for j in 1..k {
            v -= cst[j] * d[k - j];
        }
        d[k] = v / cst[0];
    }
    d
}

struct Filler {
    rows: Vec<Vec<C64>>,
    filled: Vec<Vec<bool>>,
    n_cap: usize,
    k_max: usize,
    bad: usize,
}

impl Filler {
    fn get(&mut self, n: i64, k: usize) -> C64 {
        if n < -(k as i64) || n > n_max(self.n_cap, self.k_max, k) {
            return c(0.0);
        }
        let i = (n + k as i64) as usize;
        if !self.filled[k][i] {
            self.bad += 1;
        }
        self.rows[k][i]
    }
}

/// Fill the table in order of ascending `k`, then ascending `n`.
pub fn solve(s: [f64; 2], gamma: f64, kappa: C64, k_max: usize, n_cap: usize, gauge: Gauge) -> Result<PSeriesTable> {
    if !(s[0].is_finite() && s[1].is_finite() && gamma.is_finite() && kappa.re.is_finite() && kappa.im.is_finite()) {
        return Err(Error::InvalidInput("non-finite series parameters"));
    }
    let d = s[0] - s[1];
    let mut f = Filler {
        rows: (0..=k_max).map(|k| vec![c(0.0); (n_max(n_cap, k_max, k) + k as i64 + 1) as usize]).collect(),
        filled: (0..=k_max).map(|k| vec![false; (n_max(n_cap, k_max, k) + k as i64 + 1) as usize]).collect(),
        n_cap,
        k_max,
        bad: 0,
    };
    let mut eps = vec![c(0.0); k_max + 1];
    eps[0] = c(0.5 * (s[0] * s[0] + s[1] * s[1]));
    for k in 0..=k_max {
        let ki = k as i64;
        for n in -ki..=n_max(n_cap, k_max, k) {
            let idx = (n + ki) as usize;
            if n == 0 && k == 0 {
                f.rows[0][idx] = c(1.0);
                f.filled[0][idx] = true;
                continue;
            }
            let mut rhs = c(0.0);
            for kp in 1..=k {
                if n == 0 && kp == k {
                    continue;
                }
                rhs += eps[kp] * f.get(n, k - kp);
            }
            let mut w = c(0.0);
            for m in 1..=(n + ki) {
                w += f.get(n - m, k) * m as f64;
            }
            for nu in 1..=k {
                for m in 1..=(k / nu) {
                    let kk = k - nu * m;
                    let mi = m as i64;
                    w += (f.get(n - mi, kk) + f.get(n + mi, kk)) * m as f64;
                }
            }
            rhs += w * gamma;
            if n == 0 && gauge == Gauge::I {
                eps[k] = -rhs;
                f.filled[k][idx] = true;
                continue;
            }
            let div = C64::new(n as f64 * (n as f64 + d), 0.0) - kappa * k as f64;
            if div.norm() < RESONANCE_TOL {
                return Err(Error::Resonance { n, k });
            }
            f.rows[k][idx] = rhs / div;
            f.filled[k][idx] = true;
        }
    }
    Ok(PSeriesTable { s, gamma, kappa, k_max, n_cap, gauge, rows: f.rows, eps, unfilled_reads: f.bad })
}

/// Stationary solution with `a_{0,k} = 0`.
pub fn solve_variant_i(s: [f64; 2], gamma: f64, k_max: usize, n_cap: usize) -> Result<PSeriesTable> {
    solve(s, gamma, c(0.0), k_max, n_cap, Gauge::I)
}

/// Non-stationary solution with `eps_k = 0` for `k >= 1`.
pub fn solve_variant_ii(s: [f64; 2], gamma: f64, kappa: C64, k_max: usize, n_cap: usize) -> Result<PSeriesTable> {
    solve(s, gamma, kappa, k_max, n_cap, Gauge::II)
}

/// Largest change of the entries with `n <= n_cap` when `n_cap` is doubled.
pub fn certify_ncap(t: &PSeriesTable) -> Result<f64> {
    let big = solve(t.s, t.gamma, t.kappa, t.k_max, 2 * t.n_cap, t.gauge)?;
    let mut ch = 0.0f64;
    for (n, k, v) in t.entries() {
        if n <= t.n_cap as i64 {
            ch = ch.max((v - big.get(n, k)).norm());
        }
    }
    for k in 0..=t.k_max {
        ch = ch.max((t.eps[k] - big.eps[k]).norm());
    }
    Ok(ch)
}

/// Truncated double series `sum c_{n,k} u^n p^k` (prefactor `z1^s1 z2^s2`
/// implied). Row `k` is kept on the window `n <= n_max[k]`; products are
/// exact there as long as the window shrinks by at least one per order.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPSeries {
    pub s: [f64; 2],
    pub n_max: Vec<i64>,
    coeffs: BTreeMap<(usize, i64), C64>,
}

impl LaurentPSeries {
    pub fn zero(s: [f64; 2], n_max: Vec<i64>) -> Self {
        LaurentPSeries { s, n_max, coeffs: BTreeMap::new() }
    }

    pub fn k_max(&self) -> usize {
        self.n_max.len() - 1
    }

    fn inside(&self, n: i64, k: usize) -> bool {
        k < self.n_max.len() && n >= -(k as i64) && n <= self.n_max[k]
    }

    pub fn get(&self, n: i64, k: usize) -> C64 {
        self.coeffs.get(&(k, n)).copied().unwrap_or(c(0.0))
    }

    /// Add to a coefficient; terms outside the window are dropped.
    pub fn add_at(&mut self, n: i64, k: usize, v: C64) {
        if self.inside(n, k) && v != c(0.0) {
            *self.coeffs.entry((k, n)).or_insert(c(0.0)) += v;
        }
    }

    /// `(n, k, c)` over stored coefficients.
    pub fn iter(&self) -> impl Iterator<Item = (i64, usize, C64)> + '_ {
        self.coeffs.iter().map(|(&(k, n), &v)| (n, k, v))
    }

    pub fn from_table(t: &PSeriesTable) -> Self {
        let mut f = LaurentPSeries::zero(t.s, (0..=t.k_max).map(|k| t.n_max(k)).collect());
        for (n, k, v) in t.entries() {
            f.add_at(n, k, v);
        }
        f
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (n, k, v) in o.iter() {
            r.add_at(n, k, v);
        }
        r
    }

    pub fn scale(&self, a: C64) -> Self {
        let mut r = Self::zero(self.s, self.n_max.clone());
        for (n, k, v) in self.iter() {
            r.add_at(n, k, v * a);
        }
        r
    }

    fn map(&self, f: impl Fn(i64, usize) -> C64) -> Self {
        let mut r = Self::zero(self.s, self.n_max.clone());
        for (n, k, v) in self.iter() {
            r.add_at(n, k, v * f(n, k));
        }
        r
    }

    /// `z1 d/dz1`.
    pub fn euler1(&self) -> Self {
        let s1 = self.s[0];
        self.map(|n, _| c(n as f64 + s1))
    }

    /// `z2 d/dz2`.
    pub fn euler2(&self) -> Self {
        let s2 = self.s[1];
        self.map(|n, _| c(s2 - n as f64))
    }

    /// `p d/dp`.
    pub fn euler_p(&self) -> Self {
        self.map(|_, k| c(k as f64))
    }

    /// Multiply by a series in `p` alone.
    pub fn mul_p_series(&self, a: &[C64]) -> Self {
        let mut r = Self::zero(self.s, self.n_max.clone());
        for (n, k, v) in self.iter() {
            for (j, &aj) in a.iter().enumerate() {
                r.add_at(n, k + j, v * aj);
            }
        }
        r
    }

    /// Multiply by `W = sum_m m (u^m + sum_nu p^{m nu} (u^m + u^-m))`.
    pub fn mul_w(&self) -> Self {
        let kmax = self.k_max();
        let mut r = Self::zero(self.s, self.n_max.clone());
        for (n, k, v) in self.iter() {
            let mut m = 1i64;
            while n + m <= self.n_max[k] {
                r.add_at(n + m, k, v * m as f64);
                m += 1;
            }
            for nu in 1..=kmax {
                for m in 1..=kmax / nu {
                    let kk = k + nu * m;
                    if kk > kmax {
                        break;
                    }
                    let mi = m as i64;
                    r.add_at(n + mi, kk, v * m as f64);
                    r.add_at(n - mi, kk, v * m as f64);
                }
            }
        }
        r
    }

    pub fn max_abs(&self) -> f64 {
        self.iter().fold(0.0f64, |m, (_, _, v)| m.max(v.norm()))
    }
}

/// `L f = -kappa p f_p + (z1 d1)^2 f / 2 + (z2 d2)^2 f / 2 - eps f - gamma W f`.
pub fn apply_l(f: &LaurentPSeries, eps: &[C64], gamma: f64, kappa: C64) -> LaurentPSeries {
    let a = f.euler_p().scale(-kappa);
    let b = f.euler1().euler1().scale(c(0.5));
    let d = f.euler2().euler2().scale(c(0.5));
    let e = f.mul_p_series(eps).scale(c(-1.0));
    let w = f.mul_w().scale(c(-gamma));
    a.add(&b).add(&d).add(&e).add(&w)
}

/// Residual series of a solved table.
pub fn apply_l_series(t: &PSeriesTable) -> LaurentPSeries {
    apply_l(&LaurentPSeries::from_table(t), &t.eps, t.gamma, t.kappa)
}

/// Largest residual coefficient relative to the largest table entry.
pub fn relative_residual(t: &PSeriesTable) -> f64 {
    apply_l_series(t).max_abs() / t.max_abs()
}

/// Result of the `kappa -> 0` extrapolation.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeExtrapolation {
    pub eps: Vec<C64>,
    /// Estimated absolute error per order.
    pub error: Vec<f64>,
}

/// `eps + kappa p d/dp ln C` from a gauge II table.
pub fn gauge_eigenvalue(t: &PSeriesTable) -> Vec<C64> {
    let d = log_derivative(&t.constant_part());
    (0..=t.k_max).map(|k| t.eps[k] + t.kappa * d[k]).collect()
}

/// Stationary eigenvalue series from gauge II solutions at
/// `kappa_j = i 2^-j`, `j = 4..=12`, by Richardson extrapolation in `kappa`.
///
/// Small `kappa` loses digits (`a_{0,k}` grows like `kappa^-k`), so each order
/// uses the diagonal Richardson entry with the smallest successive change.
pub fn eigenvalue_from_gauge(s: [f64; 2], gamma: f64, k_max: usize, n_cap: usize) -> Result<GaugeExtrapolation> {
    let seq: Vec<Vec<C64>> = (4..=12)
        .map(|j| {
            let kap = C64::new(0.0, 0.5f64.powi(j));
            solve_variant_ii(s, gamma, kap, k_max, n_cap).map(|t| gauge_eigenvalue(&t))
        })
        .collect::<Result<_>>()?;
    let mut eps = vec![c(0.0); k_max + 1];
    let mut error = vec![0.0; k_max + 1];
    for k in 0..=k_max {
        let col: Vec<C64> = seq.iter().map(|v| v[k]).collect();
        let (v, e) = richardson(&col);
        let scale = v.norm().max(1.0);
        if !(e / scale < 1e-2) {
            return Err(Error::Extrapolation);
        }
        eps[k] = v;
        error[k] = e;
    }
    Ok(GaugeExtrapolation { eps, error })
}

/// Richardson for a sequence sampled at step ratio 2 with error `O(h)`.
/// Returns the diagonal entry with the smallest change and that change.
fn richardson(col: &[C64]) -> (C64, f64) {
    let mut prev = col.to_vec();
    let mut best = (col[0], f64::INFINITY);
    let mut last = col[0];
    for m in 1..col.len() {
        let f = 2f64.powi(m as i32);
        let next: Vec<C64> = (0..prev.len() - 1).map(|i| (prev[i + 1] * f - prev[i]) / (f - 1.0)).collect();
        let e = (next[0] - last).norm();
        if e < best.1 {
            best = (next[0], e);
        }
        last = next[0];
        prev = next;
    }
    best
}
