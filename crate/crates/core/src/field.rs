//! Functions of `N` coordinates together with their derivatives.
//!
//! Operators only ever need `psi`, the first and the diagonal second
//! derivatives, and optionally `d psi / d tau`. Fields that know these
//! analytically say so through [`SmoothField::analytic_jet`]; for the rest a
//! fourth-order central difference is used and checked against the same
//! difference at half the step.

use crate::domain::{EllipticDomain, Truncation};
use crate::kernels::{theta1_dlog_tau, theta1_neg_d2log, theta1_pow, zeta1};
use crate::prelude::*;

/// Value, gradient and diagonal of the Hessian at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub value: C64,
    pub d1: Vec<C64>,
    pub d2: Vec<C64>,
}

impl Jet {
    /// Jet of `exp(L)` given the derivatives of `L` and the value.
    pub fn from_log(value: C64, l1: &[C64], l2: &[C64]) -> Jet {
        let d1 = l1.iter().map(|&a| a * value).collect();
        let d2 = l1.iter().zip(l2).map(|(&a, &b)| (a * a + b) * value).collect();
        Jet { value, d1, d2 }
    }
}

pub trait SmoothField {
    fn dim(&self) -> usize;

    fn value(&self, x: &[C64]) -> Result<C64>;

    /// Analytic jet; `None` means "use finite differences".
    fn analytic_jet(&self, _x: &[C64]) -> Option<Result<Jet>> {
        None
    }

    /// Analytic `d/dtau` at fixed `x`; `None` if the field has no tau-dependence model.
    fn dtau(&self, _x: &[C64]) -> Option<Result<C64>> {
        None
    }
}

/// Step and tolerance for the finite-difference fallback.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdConfig {
    pub h: f64,
    pub tol: f64,
}

impl Default for FdConfig {
    fn default() -> Self {
        FdConfig { h: 1e-2, tol: 1e-6 }
    }
}

fn fd_pass(psi: &dyn SmoothField, x: &[C64], h: f64, v0: C64) -> Result<(Vec<C64>, Vec<C64>)> {
    let n = psi.dim();
    let mut d1 = Vec::with_capacity(n);
    let mut d2 = Vec::with_capacity(n);
    let mut y = x.to_vec();
    for i in 0..n {
        let mut at = |s: f64| -> Result<C64> {
            y[i] = x[i] + s * h;
            let v = psi.value(&y);
            y[i] = x[i];
            v
        };
        let (m2, m1, p1, p2) = (at(-2.0)?, at(-1.0)?, at(1.0)?, at(2.0)?);
        d1.push((m2 - p2 + (p1 - m1) * 8.0) / (12.0 * h));
        d2.push((-(m2 + p2) + (p1 + m1) * 16.0 - v0 * 30.0) / (12.0 * h * h));
    }
    Ok((d1, d2))
}

/// Jet of `psi` at `x`, analytic when available.
pub fn jet(psi: &dyn SmoothField, x: &[C64], fd: &FdConfig) -> Result<Jet> {
    if x.len() != psi.dim() {
        return Err(Error::InvalidInput("coordinate count does not match field"));
    }
    if let Some(j) = psi.analytic_jet(x) {
        return j;
    }
    let v0 = psi.value(x)?;
    let (a1, a2) = fd_pass(psi, x, fd.h, v0)?;
    let (b1, b2) = fd_pass(psi, x, fd.h / 2.0, v0)?;
    let scale = v0.norm().max(1e-300);
    let mut change = 0.0f64;
    for i in 0..a1.len() {
        change = change.max((a1[i] - b1[i]).norm() / scale).max((a2[i] - b2[i]).norm() / scale);
    }
    if change > 10.0 * fd.tol {
        return Err(Error::FdInconsistent { change });
    }
    Ok(Jet { value: v0, d1: b1, d2: b2 })
}

/// A field given only by its values.
pub struct FnField<F> {
    pub dim: usize,
    pub f: F,
}

impl<F: Fn(&[C64]) -> Result<C64>> SmoothField for FnField<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn value(&self, x: &[C64]) -> Result<C64> {
        (self.f)(x)
    }
}

/// `exp(i k . x)`, with no tau-dependence.
pub struct PlaneWave {
    pub k: Vec<C64>,
}

impl SmoothField for PlaneWave {
    fn dim(&self) -> usize {
        self.k.len()
    }
    fn value(&self, x: &[C64]) -> Result<C64> {
        let s: C64 = self.k.iter().zip(x).map(|(&k, &xi)| k * xi).sum();
        Ok((I * s).exp())
    }
    fn analytic_jet(&self, x: &[C64]) -> Option<Result<Jet>> {
        let v = match self.value(x) {
            Ok(v) => v,
            Err(e) => return Some(Err(e)),
        };
        let l1: Vec<C64> = self.k.iter().map(|&k| I * k).collect();
        let l2 = vec![c(0.0); self.k.len()];
        Some(Ok(Jet::from_log(v, &l1, &l2)))
    }
    fn dtau(&self, _x: &[C64]) -> Option<Result<C64>> {
        Some(Ok(c(0.0)))
    }
}

/// Product of two fields in the same coordinates.
pub struct Product<'a> {
    pub a: &'a dyn SmoothField,
    pub b: &'a dyn SmoothField,
    pub fd: FdConfig,
}

impl SmoothField for Product<'_> {
    fn dim(&self) -> usize {
        self.a.dim()
    }
    fn value(&self, x: &[C64]) -> Result<C64> {
        Ok(self.a.value(x)? * self.b.value(x)?)
    }
    fn analytic_jet(&self, x: &[C64]) -> Option<Result<Jet>> {
        let run = || -> Result<Jet> {
            let ja = jet(self.a, x, &self.fd)?;
            let jb = jet(self.b, x, &self.fd)?;
            let n = ja.d1.len();
            let d1 = (0..n).map(|i| ja.d1[i] * jb.value + ja.value * jb.d1[i]).collect();
            let d2 = (0..n)
                .map(|i| ja.d2[i] * jb.value + ja.d1[i] * jb.d1[i] * 2.0 + ja.value * jb.d2[i])
                .collect();
            Ok(Jet { value: ja.value * jb.value, d1, d2 })
        };
        Some(run())
    }
    fn dtau(&self, x: &[C64]) -> Option<Result<C64>> {
        let ta = self.a.dtau(x)?;
        let tb = self.b.dtau(x)?;
        let run = || -> Result<C64> { Ok(ta? * self.b.value(x)? + self.a.value(x)? * tb?) };
        Some(run())
    }
}

/// `C psi` with a tau-dependent constant: `C` and `dC/dtau` at the current tau.
pub struct Gauged<'a> {
    pub inner: &'a dyn SmoothField,
    pub c: C64,
    pub dc: C64,
    pub fd: FdConfig,
}

impl SmoothField for Gauged<'_> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn value(&self, x: &[C64]) -> Result<C64> {
        Ok(self.inner.value(x)? * self.c)
    }
    fn analytic_jet(&self, x: &[C64]) -> Option<Result<Jet>> {
        Some(jet(self.inner, x, &self.fd).map(|j| Jet {
            value: j.value * self.c,
            d1: j.d1.iter().map(|&v| v * self.c).collect(),
            d2: j.d2.iter().map(|&v| v * self.c).collect(),
        }))
    }
    fn dtau(&self, x: &[C64]) -> Option<Result<C64>> {
        let t = self.inner.dtau(x)?;
        Some(t.and_then(|t| Ok(t * self.c + self.inner.value(x)? * self.dc)))
    }
}

/// `psi(a x)` in every coordinate.
pub struct Dilated<'a> {
    pub inner: &'a dyn SmoothField,
    pub a: f64,
    pub fd: FdConfig,
}

impl SmoothField for Dilated<'_> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn value(&self, x: &[C64]) -> Result<C64> {
        let y: Vec<C64> = x.iter().map(|&v| v * self.a).collect();
        self.inner.value(&y)
    }
    fn analytic_jet(&self, x: &[C64]) -> Option<Result<Jet>> {
        let y: Vec<C64> = x.iter().map(|&v| v * self.a).collect();
        Some(jet(self.inner, &y, &self.fd).map(|j| Jet {
            value: j.value,
            d1: j.d1.iter().map(|&v| v * self.a).collect(),
            d2: j.d2.iter().map(|&v| v * (self.a * self.a)).collect(),
        }))
    }
    fn dtau(&self, x: &[C64]) -> Option<Result<C64>> {
        let y: Vec<C64> = x.iter().map(|&v| v * self.a).collect();
        self.inner.dtau(&y)
    }
}

/// `psi(x_sigma(0), x_sigma(1), ...)`: coordinates read through a permutation.
pub struct Permuted<'a> {
    pub inner: &'a dyn SmoothField,
    pub sigma: Vec<usize>,
    pub fd: FdConfig,
}

impl Permuted<'_> {
    fn pull(&self, x: &[C64]) -> Vec<C64> {
        self.sigma.iter().map(|&s| x[s]).collect()
    }
}

impl SmoothField for Permuted<'_> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn value(&self, x: &[C64]) -> Result<C64> {
        self.inner.value(&self.pull(x))
    }
    fn analytic_jet(&self, x: &[C64]) -> Option<Result<Jet>> {
        let run = || -> Result<Jet> {
            let j = jet(self.inner, &self.pull(x), &self.fd)?;
            let mut d1 = vec![c(0.0); j.d1.len()];
            let mut d2 = vec![c(0.0); j.d2.len()];
            for (k, &s) in self.sigma.iter().enumerate() {
                d1[s] = j.d1[k];
                d2[s] = j.d2[k];
            }
            Ok(Jet { value: j.value, d1, d2 })
        };
        Some(run())
    }
    fn dtau(&self, x: &[C64]) -> Option<Result<C64>> {
        self.inner.dtau(&self.pull(x))
    }
}

/// `psi(x + s)` for a fixed shift vector `s`.
pub struct Translated<'a> {
    pub inner: &'a dyn SmoothField,
    pub shift: Vec<C64>,
    pub fd: FdConfig,
}

impl Translated<'_> {
    fn moved(&self, x: &[C64]) -> Vec<C64> {
        x.iter().zip(&self.shift).map(|(&a, &b)| a + b).collect()
    }
}

impl SmoothField for Translated<'_> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn value(&self, x: &[C64]) -> Result<C64> {
        self.inner.value(&self.moved(x))
    }
    fn analytic_jet(&self, x: &[C64]) -> Option<Result<Jet>> {
        Some(jet(self.inner, &self.moved(x), &self.fd))
    }
    fn dtau(&self, x: &[C64]) -> Option<Result<C64>> {
        self.inner.dtau(&self.moved(x))
    }
}

/// `psi0(x) = prod_{i<j} theta1(x_i - x_j)^g`.
///
/// For non-integer `g` the value exists only where every `x_i - x_j` with
/// `i < j` is real and in `(0, 2l)`, i.e. for strictly decreasing real
/// coordinates spanning less than `2l`.
pub struct GroundState {
    pub n: usize,
    pub g: f64,
    pub dom: EllipticDomain,
    pub pol: Truncation,
}

impl GroundState {
    /// Log-derivatives `(d_i log psi0, d_i^2 log psi0)`; branch-free.
    pub fn log_derivs(&self, x: &[C64]) -> Result<(Vec<C64>, Vec<C64>)> {
        let mut l1 = vec![c(0.0); self.n];
        let mut l2 = vec![c(0.0); self.n];
        for i in 0..self.n {
            for j in i + 1..self.n {
                let d = x[i] - x[j];
                let z = zeta1(d, &self.dom, &self.pol)? * self.g;
                let w = theta1_neg_d2log(d, &self.dom, &self.pol)? * self.g;
                l1[i] += z;
                l1[j] -= z;
                l2[i] -= w;
                l2[j] -= w;
            }
        }
        Ok((l1, l2))
    }

    /// `d/dtau log psi0`.
    pub fn log_dtau(&self, x: &[C64]) -> Result<C64> {
        let mut s = c(0.0);
        for i in 0..self.n {
            for j in i + 1..self.n {
                s += theta1_dlog_tau(x[i] - x[j], &self.dom, &self.pol)?;
            }
        }
        Ok(s * self.g)
    }
}

impl SmoothField for GroundState {
    fn dim(&self) -> usize {
        self.n
    }
    fn value(&self, x: &[C64]) -> Result<C64> {
        let mut v = c(1.0);
        for i in 0..self.n {
            for j in i + 1..self.n {
                v *= theta1_pow(x[i] - x[j], self.g, &self.dom, &self.pol)?;
            }
        }
        Ok(v)
    }
    fn analytic_jet(&self, x: &[C64]) -> Option<Result<Jet>> {
        let run = || -> Result<Jet> {
            let v = self.value(x)?;
            let (l1, l2) = self.log_derivs(x)?;
            Ok(Jet::from_log(v, &l1, &l2))
        };
        Some(run())
    }
    fn dtau(&self, x: &[C64]) -> Option<Result<C64>> {
        Some(self.value(x).and_then(|v| Ok(v * self.log_dtau(x)?)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fd_matches_plane_wave() {
        let pw = PlaneWave { k: vec![c(1.3), c(-0.4)] };
        let f = FnField { dim: 2, f: |x: &[C64]| pw.value(x) };
        let x = [c(0.2), c(0.9)];
        let a = jet(&pw, &x, &FdConfig::default()).unwrap();
        let b = jet(&f, &x, &FdConfig::default()).unwrap();
        for i in 0..2 {
            assert!((a.d1[i] - b.d1[i]).norm() < 1e-8);
            assert!((a.d2[i] - b.d2[i]).norm() < 1e-7);
        }
    }

    #[test]
    fn fd_flags_rough_field() {
        let f = FnField { dim: 1, f: |x: &[C64]| Ok((x[0] * 400.0).sin()) };
        assert!(matches!(jet(&f, &[c(0.1)], &FdConfig::default()), Err(Error::FdInconsistent { .. })));
    }
}
