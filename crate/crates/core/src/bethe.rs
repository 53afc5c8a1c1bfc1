//! Hermite's Bethe ansatz for the Lame equation at `g = -n`.
//!
//! `psi(x) = exp(xi x) prod_j theta1(x - t_j) / theta1(x)^n` solves
//! `(-d^2 + n(n+1) wp1) psi = E psi` once the roots satisfy
//! `sum_{k != j} (zeta1(t_j - t_k) - zeta1(t_j) + zeta1(t_k)) = 0` and
//! `xi = sum_j zeta1(t_j)`.

use crate::domain::{EllipticDomain, Truncation};
use crate::field::{FdConfig, Jet, SmoothField};
use crate::kernels::{lattice_distance, theta1, theta1_ln, theta1_neg_d2log, wp1, zeta1, zeta1_fourier};
use crate::linalg::{min_norm_solve, CMat};
use crate::operators::{lame_residual, Env};
use crate::prelude::*;

/// A converged solution with its certificates.
#[derive(Debug, Clone, PartialEq)]
pub struct BetheState {
    pub n: usize,
    pub roots: Vec<C64>,
    pub xi: C64,
    pub energy: C64,
    /// `max_j |r_j|` of the Bethe equations.
    pub bethe_residual: f64,
    /// `max |(-d^2 + n(n+1) wp1 - E) psi| / |psi|` over the sample points.
    pub ode_residual: f64,
    /// `|xi - sum_j zeta1(t_j)|` with `zeta1` from its sine series.
    pub xi_identity: f64,
    /// Spread of the energy quotient over the sample points.
    pub energy_spread: f64,
    /// `max_j |dG/dt_j|`.
    pub saddle_gradient: f64,
    /// `E + (2n - 1) sum_j wp1(t_j)`.
    pub constant: C64,
    /// `|psi'(x)/psi(x) + psi'(-x)/psi(-x)|`, the normalized Wronskian of `psi(x)`, `psi(-x)`.
    pub wronskian: f64,
    /// Wronskian below `1e-8`: `psi(x)` and `psi(-x)` are not independent.
    pub degenerate: bool,
}

fn check_roots(t: &[C64], dom: &EllipticDomain) -> Result<()> {
    let tol = 1e-8 * dom.ell();
    for (j, &a) in t.iter().enumerate() {
        if lattice_distance(a, dom) < tol {
            return Err(Error::RootCollision);
        }
        for &b in &t[j + 1..] {
            if lattice_distance(a - b, dom) < tol {
                return Err(Error::RootCollision);
            }
        }
    }
    Ok(())
}

/// Left-hand sides of the Bethe equations.
pub fn bethe_residuals(t: &[C64], dom: &EllipticDomain, pol: &Truncation) -> Result<Vec<C64>> {
    check_roots(t, dom)?;
    let zs: Vec<C64> = t.iter().map(|&a| zeta1(a, dom, pol)).collect::<Result<_>>()?;
    let n = t.len();
    let mut r = vec![c(0.0); n];
    for j in 0..n {
        for k in 0..n {
            if k != j {
                r[j] += zeta1(t[j] - t[k], dom, pol)? - zs[j] + zs[k];
            }
        }
    }
    Ok(r)
}

/// Jacobian `d r_j / d t_m`.
pub fn bethe_jacobian(t: &[C64], dom: &EllipticDomain, pol: &Truncation) -> Result<CMat> {
    check_roots(t, dom)?;
    let n = t.len();
    let wp: Vec<C64> = t.iter().map(|&a| theta1_neg_d2log(a, dom, pol)).collect::<Result<_>>()?;
    let mut jm = CMat::zeros(n, n);
    for j in 0..n {
        let mut diag = c(0.0);
        for m in 0..n {
            if m == j {
                continue;
            }
            let w = theta1_neg_d2log(t[j] - t[m], dom, pol)?;
            diag += -w + wp[j];
            jm.set(j, m, w - wp[m]);
        }
        jm.set(j, j, diag);
    }
    Ok(jm)
}

/// Newton and continuation controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetheOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub growth: f64,
    pub p_start: f64,
}

impl Default for BetheOptions {
    fn default() -> Self {
        BetheOptions { tol: 1e-12, max_iter: 50, growth: 1.5, p_start: 1e-3 }
    }
}

fn max_norm(v: &[C64]) -> f64 {
    v.iter().fold(0.0f64, |m, a| m.max(a.norm()))
}

/// Newton with the minimum-norm step. The residuals sum to zero, so only the
/// first `n - 1` equations are used and the solution set is a curve; the
/// minimum-norm step moves straight towards it.
pub fn newton(t0: &[C64], dom: &EllipticDomain, pol: &Truncation, opts: &BetheOptions) -> Result<Vec<C64>> {
    let n = t0.len();
    let mut t = t0.to_vec();
    if n < 2 {
        check_roots(&t, dom)?;
        return Ok(t);
    }
    let mut res = f64::INFINITY;
    for _ in 0..=opts.max_iter {
        let r = bethe_residuals(&t, dom, pol)?;
        res = max_norm(&r);
        if res <= opts.tol {
            return Ok(t);
        }
        let jm = bethe_jacobian(&t, dom, pol)?;
        let mut jr = CMat::zeros(n - 1, n);
        jr.data.copy_from_slice(&jm.data[..(n - 1) * n]);
        let rhs: Vec<C64> = r[..n - 1].iter().map(|&v| -v).collect();
        let step = min_norm_solve(&jr, &rhs).map_err(|_| Error::NonConvergence { residual: res })?;
        for (a, s) in t.iter_mut().zip(step) {
            *a += s;
        }
        check_roots(&t, dom)?;
    }
    Err(Error::NonConvergence { residual: res })
}

/// Default seeds `t_j = l (0.35 + 0.5 j/n) + i l (0.15 + 0.25 j/n)`.
pub fn default_seeds(n: usize, ell: f64) -> Vec<C64> {
    (0..n)
        .map(|j| {
            let f = j as f64 / n as f64;
            C64::new(ell * (0.35 + 0.5 * f), ell * (0.15 + 0.25 * f))
        })
        .collect()
}

/// Roots by continuation in the nome from `min(p, p_start)` up to `p` in
/// geometric steps.
pub fn continue_roots(n: usize, dom: &EllipticDomain, pol: &Truncation, opts: &BetheOptions) -> Result<Vec<C64>> {
    let p = dom.p();
    let mut t = default_seeds(n, dom.ell());
    let mut pc = p.min(opts.p_start);
    loop {
        let d = dom.with_nome(pc)?;
        t = newton(&t, &d, pol, opts)?;
        if pc >= p {
            return Ok(t);
        }
        pc = (pc * opts.growth).min(p);
    }
}

/// Hermite's eigenfunction as a field of one coordinate.
pub struct Hermite {
    pub roots: Vec<C64>,
    pub xi: C64,
    pub dom: EllipticDomain,
    pub pol: Truncation,
}

impl Hermite {
    /// `(d log psi, d^2 log psi)` at `x`.
    pub fn log_derivs(&self, x: C64) -> Result<(C64, C64)> {
        let (dom, pol) = (&self.dom, &self.pol);
        let n = self.roots.len() as f64;
        let mut l1 = self.xi - zeta1(x, dom, pol)? * n;
        let mut l2 = theta1_neg_d2log(x, dom, pol)? * n;
        for &t in &self.roots {
            l1 += zeta1(x - t, dom, pol)?;
            l2 -= theta1_neg_d2log(x - t, dom, pol)?;
        }
        Ok((l1, l2))
    }

    /// The same construction for `psi(-x)`: roots and `xi` flip sign.
    pub fn reflected(&self) -> Hermite {
        Hermite { roots: self.roots.iter().map(|&t| -t).collect(), xi: -self.xi, dom: self.dom, pol: self.pol }
    }

    /// Multipliers `(B_l, B_delta)` with `psi(x + 2l) = B_l psi(x)` and
    /// `psi(x + 2 i delta) = B_delta psi(x)`.
    pub fn bloch_multipliers(&self) -> (C64, C64) {
        let l = self.dom.ell();
        let bl = (self.xi * (2.0 * l)).exp();
        if self.dom.is_trigonometric() {
            return (bl, c(f64::NAN));
        }
        let mut e = self.xi * C64::new(0.0, 2.0 * self.dom.delta());
        for &t in &self.roots {
            e += I * PI * t / l;
        }
        (bl, e.exp())
    }
}

impl SmoothField for Hermite {
    fn dim(&self) -> usize {
        1
    }
    fn value(&self, x: &[C64]) -> Result<C64> {
        let x = x[0];
        let (dom, pol) = (&self.dom, &self.pol);
        let mut v = (self.xi * x).exp();
        let den = theta1(x, dom, pol)?;
        if lattice_distance(x, dom) < 1e-12 * dom.ell() {
            return Err(Error::Pole);
        }
        for &t in &self.roots {
            v *= theta1(x - t, dom, pol)? / den;
        }
        Ok(v)
    }
    fn analytic_jet(&self, x: &[C64]) -> Option<Result<Jet>> {
        let run = || -> Result<Jet> {
            let v = self.value(x)?;
            let (l1, l2) = self.log_derivs(x[0])?;
            Ok(Jet::from_log(v, &[l1], &[l2]))
        };
        Some(run())
    }
}

/// `psi` of a state at `x`.
pub fn hermite_psi(x: C64, state: &BetheState, dom: &EllipticDomain, pol: &Truncation) -> Result<C64> {
    Hermite { roots: state.roots.clone(), xi: state.xi, dom: *dom, pol: *pol }.value(&[x])
}

/// Deterministic sample points away from the lattice and from the roots.
pub fn sample_points(roots: &[C64], dom: &EllipticDomain, count: usize) -> Vec<C64> {
    let l = dom.ell();
    let mut out = Vec::with_capacity(count);
    let mut k = 0usize;
    while out.len() < count && k < 200 {
        let x = C64::new(l * (0.21 + 0.137 * k as f64 % 1.6), l * 0.06 * ((k % 3) as f64 - 1.0));
        k += 1;
        let far_lattice = lattice_distance(x, dom) > 0.05 * l;
        let far_roots = roots.iter().all(|&t| lattice_distance(x - t, dom) > 0.05 * l);
        if far_lattice && far_roots {
            out.push(x);
        }
    }
    out
}

/// Energy by the operator quotient at `x`.
fn energy_at(h: &Hermite, x: C64) -> Result<C64> {
    let n = h.roots.len() as f64;
    let (l1, l2) = h.log_derivs(x)?;
    Ok(-(l1 * l1 + l2) + wp1(x, &h.dom, &h.pol)? * (n * (n + 1.0)))
}

/// Energy report: `E` at the first sample point, the spread over the
/// others, and the constant `E + (2n-1) sum wp1(t_j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyReport {
    pub energy: C64,
    pub spread: f64,
    pub constant: C64,
}

pub fn energy_from_roots(roots: &[C64], xi: C64, dom: &EllipticDomain, pol: &Truncation) -> Result<EnergyReport> {
    let h = Hermite { roots: roots.to_vec(), xi, dom: *dom, pol: *pol };
    let pts = sample_points(roots, dom, 11);
    let e0 = energy_at(&h, pts[0])?;
    let mut spread = 0.0f64;
    for &x in &pts[1..] {
        spread = spread.max((energy_at(&h, x)? - e0).norm());
    }
    let n = roots.len() as f64;
    let mut s = c(0.0);
    for &t in roots {
        s += wp1(t, dom, pol)?;
    }
    Ok(EnergyReport { energy: e0, spread, constant: e0 + s * (2.0 * n - 1.0) })
}

/// `G(t) = sum_j (xi t_j - n log theta1(t_j)) + sum_{j<k} log theta1(t_j - t_k)`.
///
/// Only defined for real, strictly decreasing roots in `(0, 2l)`, where every
/// theta1 argument is in the positivity interval.
pub fn saddle_g(t: &[C64], xi: C64, dom: &EllipticDomain, pol: &Truncation) -> Result<C64> {
    let n = t.len() as f64;
    let mut g = c(0.0);
    for (j, &a) in t.iter().enumerate() {
        g += xi * a - c(n * theta1_ln(a, dom, pol)?);
        for &b in &t[j + 1..] {
            g += c(theta1_ln(a - b, dom, pol)?);
        }
    }
    Ok(g)
}

/// `dG/dt_j = xi - n zeta1(t_j) + sum_{k != j} zeta1(t_j - t_k)`; branch-free.
pub fn saddle_gradient(t: &[C64], xi: C64, dom: &EllipticDomain, pol: &Truncation) -> Result<Vec<C64>> {
    check_roots(t, dom)?;
    let n = t.len();
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = xi - zeta1(t[j], dom, pol)? * n as f64;
        for k in 0..n {
            if k != j {
                v += zeta1(t[j] - t[k], dom, pol)?;
            }
        }
        out.push(v);
    }
    Ok(out)
}

/// Assemble a state from roots (no solving) and compute every certificate.
pub fn certify(roots: &[C64], dom: &EllipticDomain, pol: &Truncation) -> Result<BetheState> {
    let n = roots.len();
    if n == 0 {
        return Err(Error::InvalidInput("need at least one root"));
    }
    let r = bethe_residuals(roots, dom, pol)?;
    let mut xi = c(0.0);
    let mut xi_f = c(0.0);
    for &t in roots {
        xi += zeta1(t, dom, pol)?;
        xi_f += zeta1_fourier(t, dom, pol)?;
    }
    let rep = energy_from_roots(roots, xi, dom, pol)?;
    let h = Hermite { roots: roots.to_vec(), xi, dom: *dom, pol: *pol };
    let env = Env { dom: *dom, pol: *pol, fd: FdConfig::default() };
    let pts = sample_points(roots, dom, 11);
    let mut ode = 0.0f64;
    for &x in &pts {
        let res = lame_residual(&h, rep.energy, x, -(n as f64), false, &env)?;
        ode = ode.max(res.norm() / h.value(&[x])?.norm());
    }
    let grad = saddle_gradient(roots, xi, dom, pol)?;
    let x0 = pts[0];
    let w = (h.log_derivs(x0)?.0 + h.reflected().log_derivs(x0)?.0).norm();
    Ok(BetheState {
        n,
        roots: roots.to_vec(),
        xi,
        energy: rep.energy,
        bethe_residual: max_norm(&r),
        ode_residual: ode,
        xi_identity: (xi - xi_f).norm(),
        energy_spread: rep.spread,
        saddle_gradient: max_norm(&grad),
        constant: rep.constant,
        wronskian: w,
        degenerate: w <= 1e-8,
    })
}

/// Solve for `n` roots: Newton from `seed` if given, otherwise continuation.
pub fn solve_bethe(
    n: usize,
    dom: &EllipticDomain,
    seed: Option<&[C64]>,
    pol: &Truncation,
    opts: &BetheOptions,
) -> Result<BetheState> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1"));
    }
    let roots = match seed {
        Some(s) if s.len() != n => return Err(Error::InvalidInput("seed length must equal n")),
        Some(s) => newton(s, dom, pol, opts)?,
        None => continue_roots(n, dom, pol, opts)?,
    };
    let st = certify(&roots, dom, pol)?;
    if st.bethe_residual > 1e-10 {
        return Err(Error::NonConvergence { residual: st.bethe_residual });
    }
    Ok(st)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_root_has_no_equation() {
        let d = EllipticDomain::from_nome(1.0, 0.05).unwrap();
        let r = bethe_residuals(&[C64::new(0.3, 0.1)], &d, &Truncation::default()).unwrap();
        assert_eq!(r, vec![c(0.0)]);
    }

    #[test]
    fn jacobian_matches_differences() {
        let d = EllipticDomain::from_nome(1.0, 0.05).unwrap();
        let pol = Truncation::default();
        let t = [C64::new(0.4, 0.2), C64::new(0.9, 0.3), C64::new(1.3, 0.1)];
        let jm = bethe_jacobian(&t, &d, &pol).unwrap();
        let h = 1e-6;
        for m in 0..3 {
            let mut tp = t;
            let mut tm = t;
            tp[m] += h;
            tm[m] -= h;
            let rp = bethe_residuals(&tp, &d, &pol).unwrap();
            let rm = bethe_residuals(&tm, &d, &pol).unwrap();
            for j in 0..3 {
                let fd = (rp[j] - rm[j]) / (2.0 * h);
                assert!((fd - jm.get(j, m)).norm() < 1e-6, "{j} {m}");
            }
        }
    }

    #[test]
    fn collision_is_reported() {
        let d = EllipticDomain::from_nome(1.0, 0.05).unwrap();
        let t = [C64::new(0.4, 0.2), C64::new(0.4, 0.2)];
        assert_eq!(bethe_residuals(&t, &d, &Truncation::default()), Err(Error::RootCollision));
    }
}
