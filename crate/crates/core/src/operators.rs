//! Calogero-Sutherland type operators applied to fields, and their residuals.
//!
//! Conventions: `hbar = m = 1`, potentials use [`wp1`] (cosine series) while
//! analytic fields build their derivatives from `zeta1` and the Lambert form
//! of `-d^2 log theta1`, so the two sides of every residual come from
//! different series.

use crate::domain::{EllipticDomain, RuijsenaarsParams, Truncation};
use crate::field::{jet, FdConfig, Jet, SmoothField};
use crate::kernels::{
    lattice_distance, theta1_dlog_tau, theta1_neg_d2log, theta_q, wp1, wp1_shifted, zeta1, HalfShift,
};
use crate::prelude::*;

/// Everything an operator needs besides the field and the couplings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Env {
    pub dom: EllipticDomain,
    pub pol: Truncation,
    pub fd: FdConfig,
}

impl Env {
    pub fn new(dom: EllipticDomain) -> Env {
        Env { dom, pol: Truncation::default(), fd: FdConfig::default() }
    }
}

/// eCS coupling `g` plus the four Inozemtsev couplings `g_nu`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingSet {
    pub g: f64,
    pub gnu: [f64; 4],
}

impl CouplingSet {
    pub fn ecs(g: f64) -> Self {
        CouplingSet { g, gnu: [0.0; 4] }
    }

    /// `gamma = g (g - 1)`.
    pub fn gamma(&self) -> f64 {
        self.g * (self.g - 1.0)
    }
}

fn pair_wp(a: C64, b: C64, env: &Env) -> Result<C64> {
    if lattice_distance(a - b, &env.dom) < 1e-10 * env.dom.ell() {
        return Err(Error::Coincident);
    }
    wp1(a - b, &env.dom, &env.pol)
}

/// `gamma sum_{i<j} wp1(x_i - x_j)`.
pub fn ecs_potential(x: &[C64], gamma: f64, env: &Env) -> Result<C64> {
    let mut v = c(0.0);
    if gamma == 0.0 {
        return Ok(v);
    }
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            v += pair_wp(x[i], x[j], env)?;
        }
    }
    Ok(v * gamma)
}

fn ecs_from_jet(j: &Jet, x: &[C64], gamma: f64, env: &Env) -> Result<C64> {
    let lap: C64 = j.d2.iter().sum();
    Ok(-lap * 0.5 + ecs_potential(x, gamma, env)? * j.value)
}

/// `(H psi)(x)` with `H = -1/2 sum d_i^2 + g(g-1) sum_{i<j} wp1(x_i - x_j)`.
pub fn apply_ecs(psi: &dyn SmoothField, x: &[C64], cs: &CouplingSet, env: &Env) -> Result<C64> {
    let j = jet(psi, x, &env.fd)?;
    ecs_from_jet(&j, x, cs.gamma(), env)
}

/// `(i pi kappa / 2 l^2 d/dtau + H - E) psi` at `x`.
pub fn nonstationary_residual(
    psi: &dyn SmoothField,
    kappa: C64,
    e: C64,
    x: &[C64],
    cs: &CouplingSet,
    env: &Env,
) -> Result<C64> {
    let j = jet(psi, x, &env.fd)?;
    let dt = psi.dtau(x).ok_or(Error::MissingDtau)??;
    let pre = I * kappa * (PI / (2.0 * env.dom.ell() * env.dom.ell()));
    Ok(pre * dt + ecs_from_jet(&j, x, cs.gamma(), env)? - e * j.value)
}

/// Generalized eigenvalue after `psi -> C psi`: `E + (i pi kappa / 2 l^2) C'/C`.
pub fn gauge_shift_energy(e: C64, kappa: C64, cval: C64, dc: C64, dom: &EllipticDomain) -> C64 {
    e + I * kappa * (PI / (2.0 * dom.ell() * dom.ell())) * dc / cval
}

/// `(-d^2 + g(g-1) wp1(x + s i delta) - E) psi` for one coordinate; `shifted`
/// selects `s = 1`.
pub fn lame_residual(psi: &dyn SmoothField, e: C64, x: C64, g: f64, shifted: bool, env: &Env) -> Result<C64> {
    let j = jet(psi, &[x], &env.fd)?;
    let shift = if shifted { HalfShift::IDelta } else { HalfShift::Zero };
    if !shifted && lattice_distance(x, &env.dom) < 1e-10 * env.dom.ell() {
        return Err(Error::Pole);
    }
    let v = wp1_shifted(x, shift, &env.dom, &env.pol)?;
    Ok(-j.d2[0] + (v * (g * (g - 1.0)) - e) * j.value)
}

/// `(-d^2 + sum_nu g_nu(g_nu-1) wp1(x + omega_nu) - E) psi`.
pub fn heun_residual(psi: &dyn SmoothField, e: C64, x: C64, cs: &CouplingSet, env: &Env) -> Result<C64> {
    let j = jet(psi, &[x], &env.fd)?;
    let mut pot = c(0.0);
    for (nu, s) in HalfShift::ALL.iter().enumerate() {
        let gn = cs.gnu[nu];
        let coef = gn * (gn - 1.0);
        if coef != 0.0 {
            pot += wp1_shifted(x, *s, &env.dom, &env.pol)? * coef;
        }
    }
    Ok(-j.d2[0] + (pot - e) * j.value)
}

/// Coordinates `[x_1..x_N, xt_1..xt_M]` of the deformed model.
fn deformed_terms(j: &Jet, coords: &[C64], n: usize, m: usize, g: f64, env: &Env) -> Result<C64> {
    if m > 0 && g == 0.0 {
        return Err(Error::InvalidInput("deformed operator needs g != 0"));
    }
    let (x, xt) = coords.split_at(n);
    let mut out = c(0.0);
    for i in 0..n {
        out -= j.d2[i] * 0.5;
    }
    for i in 0..m {
        out += j.d2[n + i] * (g / 2.0);
    }
    let mut pot = ecs_potential(x, g * (g - 1.0), env)?;
    if m > 0 {
        pot -= ecs_potential(xt, 1.0, env)? * (1.0 / g - 1.0);
    }
    for a in x {
        for b in xt {
            pot += pair_wp(*a, *b, env)? * (1.0 - g);
        }
    }
    Ok(out + pot * j.value)
}

/// `H_{N,M}(x, xt; g) psi` with `psi` a field of `N + M` coordinates
/// ordered `[x, xt]`.
pub fn apply_deformed_ecs(
    n: usize,
    m: usize,
    psi: &dyn SmoothField,
    coords: &[C64],
    g: f64,
    env: &Env,
) -> Result<C64> {
    if coords.len() != n + m {
        return Err(Error::InvalidInput("need N + M coordinates"));
    }
    let j = jet(psi, coords, &env.fd)?;
    deformed_terms(&j, coords, n, m, g, env)
}

/// `V(a, b; g) = g (g-1) sum_{i,j} wp1(a_i - b_j + i delta)`.
pub fn shifted_pair_potential(a: &[C64], b: &[C64], g: f64, env: &Env) -> Result<C64> {
    let mut v = c(0.0);
    if a.is_empty() || b.is_empty() {
        return Ok(v);
    }
    for &ai in a {
        for &bj in b {
            v += wp1_shifted(ai - bj, HalfShift::IDelta, &env.dom, &env.pol)?;
        }
    }
    Ok(v * (g * (g - 1.0)))
}

/// Generalized operator for four particle types, coordinates ordered
/// `[x (N1), xt (M1), y (N2), yt (M2)]`:
/// `H_{N1,M1}(x,xt) + H_{N2,M2}(y,yt) + V(x,y;g) - g V(xt,yt;1/g)
///  - V(x,yt;g)/g - V(xt,y;g)/g`.
pub fn apply_generalized_ecs(
    dims: [usize; 4],
    psi: &dyn SmoothField,
    coords: &[C64],
    g: f64,
    env: &Env,
) -> Result<C64> {
    let [n1, m1, n2, m2] = dims;
    if coords.len() != n1 + m1 + n2 + m2 {
        return Err(Error::InvalidInput("coordinate count does not match (N1, M1, N2, M2)"));
    }
    if g == 0.0 && (m1 + m2) > 0 {
        return Err(Error::InvalidInput("generalized operator needs g != 0"));
    }
    let j = jet(psi, coords, &env.fd)?;
    let first = n1 + m1;
    let x = &coords[..n1];
    let xt = &coords[n1..first];
    let y = &coords[first..first + n2];
    let yt = &coords[first + n2..];
    let j1 = Jet { value: j.value, d1: j.d1[..first].to_vec(), d2: j.d2[..first].to_vec() };
    let j2 = Jet { value: j.value, d1: j.d1[first..].to_vec(), d2: j.d2[first..].to_vec() };
    let mut out = deformed_terms(&j1, &coords[..first], n1, m1, g, env)?;
    out += deformed_terms(&j2, &coords[first..], n2, m2, g, env)?;
    let mut v = shifted_pair_potential(x, y, g, env)?;
    if m1 > 0 && m2 > 0 {
        v -= shifted_pair_potential(xt, yt, 1.0 / g, env)? * g;
    }
    if m2 > 0 {
        v -= shifted_pair_potential(x, yt, g, env)? / g;
    }
    if m1 > 0 {
        v -= shifted_pair_potential(xt, y, g, env)? / g;
    }
    Ok(out + v * j.value)
}

/// `D f(z) = sum_i prod_{j != i} theta(t z_i/z_j; p) / theta(z_i/z_j; p) f(.., q z_i, ..)`.
///
/// `sign = -1` applies the same operator with `(q, t)` replaced by `(1/q, 1/t)`.
pub fn apply_ruijsenaars_d(
    f: &dyn Fn(&[C64]) -> Result<C64>,
    z: &[C64],
    par: &RuijsenaarsParams,
    sign: i32,
    pol: &Truncation,
) -> Result<C64> {
    let (q, t) = match sign {
        1 => (par.q, par.t),
        -1 => (1.0 / par.q, 1.0 / par.t),
        _ => return Err(Error::InvalidInput("sign must be +1 or -1")),
    };
    let n = z.len();
    let mut out = c(0.0);
    let mut y = z.to_vec();
    for i in 0..n {
        let mut coef = c(1.0);
        for j in 0..n {
            if j == i {
                continue;
            }
            let w = z[i] / z[j];
            let den = theta_q(w, par.p, pol)?;
            if den.norm() < 1e-14 {
                return Err(Error::Pole);
            }
            coef *= theta_q(w * t, par.p, pol)? / den;
        }
        y[i] = z[i] * q;
        out += coef * f(&y)?;
        y[i] = z[i];
    }
    Ok(out)
}

/// `(N, M, g)` selecting `K_{N,M}`; `kappa = (N - M) g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    pub n: usize,
    pub m: usize,
    pub g: f64,
}

impl KernelSpec {
    pub fn new(n: usize, m: usize, g: f64) -> Result<Self> {
        if n + m == 0 {
            return Err(Error::InvalidInput("N + M must be positive"));
        }
        Ok(KernelSpec { n, m, g })
    }

    pub fn kappa(&self) -> f64 {
        (self.n as f64 - self.m as f64) * self.g
    }
}

/// Log-derivatives of `K_{N,M}`: `(d log K / dx_i, d^2 log K / dx_i^2)` for
/// all `N + M` coordinates `[x, y]`, and `d log K / d tau`.
pub fn kernel_log_derivs(spec: &KernelSpec, x: &[C64], y: &[C64], env: &Env) -> Result<(Vec<C64>, Vec<C64>, C64)> {
    let (dom, pol) = (&env.dom, &env.pol);
    let g = spec.g;
    let (n, m) = (spec.n, spec.m);
    if x.len() != n || y.len() != m {
        return Err(Error::InvalidInput("coordinate counts do not match (N, M)"));
    }
    let mut l1 = vec![c(0.0); n + m];
    let mut l2 = vec![c(0.0); n + m];
    let mut lt = c(0.0);
    let mut pair = |a: usize, b: usize, d: C64, sign: f64| -> Result<()> {
        if lattice_distance(d, dom) < 1e-10 * dom.ell() {
            return Err(Error::Coincident);
        }
        let z = zeta1(d, dom, pol)? * (g * sign);
        let w = theta1_neg_d2log(d, dom, pol)? * (g * sign);
        l1[a] += z;
        l1[b] -= z;
        l2[a] -= w;
        l2[b] -= w;
        lt += theta1_dlog_tau(d, dom, pol)? * (g * sign);
        Ok(())
    };
    for i in 0..n {
        for j in i + 1..n {
            pair(i, j, x[i] - x[j], 1.0)?;
        }
    }
    for i in 0..m {
        for j in i + 1..m {
            pair(n + i, n + j, y[i] - y[j], 1.0)?;
        }
    }
    for i in 0..n {
        for j in 0..m {
            pair(i, n + j, x[i] - y[j], -1.0)?;
        }
    }
    Ok((l1, l2, lt))
}

/// `R = [(i pi g (N-M) / 2 l^2) d/dtau + H_N(x) - H_M(y)] K / K`, which the
/// kernel identity says is a constant (zero for `N = M`).
pub fn kernel_identity_residual(spec: &KernelSpec, x: &[C64], y: &[C64], env: &Env) -> Result<C64> {
    let (l1, l2, lt) = kernel_log_derivs(spec, x, y, env)?;
    let n = spec.n;
    let gamma = spec.g * (spec.g - 1.0);
    let mut hx = ecs_potential(x, gamma, env)?;
    for i in 0..n {
        hx -= (l1[i] * l1[i] + l2[i]) * 0.5;
    }
    let mut hy = ecs_potential(y, gamma, env)?;
    for i in n..l1.len() {
        hy -= (l1[i] * l1[i] + l2[i]) * 0.5;
    }
    let l = env.dom.ell();
    Ok(I * (PI * spec.kappa() / (2.0 * l * l)) * lt + hx - hy)
}
