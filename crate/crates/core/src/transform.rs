//! Kernel functions and contour transforms for two particles.
//!
//! Contours are circles `|xi| = r` in the multiplicative variable
//! `xi = e^{i pi y / l}`, discretized by the trapezoidal rule. Powers
//! `theta(w; p)^g` use the factor-wise principal logarithm, which is a
//! continuous branch on `p < |w| < 1`; windings are checked anyway.

use crate::domain::{EllipticDomain, Truncation};
use crate::field::{Jet, SmoothField};
use crate::kernels::{log_theta_q, theta1_pow, ThetaLogJet};
use crate::operators::KernelSpec;
use crate::pseries::{Gauge, PSeriesTable};
use crate::prelude::*;

/// Largest node-doubling change accepted for a reported value.
pub const QUAD_TOL: f64 = 1e-10;
const SEAM_TOL: f64 = 1e-10;

/// `(lambda1, lambda2)` with `lambda1 >= lambda2 >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Partition2 {
    pub l1: i64,
    pub l2: i64,
}

impl Partition2 {
    pub fn new(l1: i64, l2: i64) -> Result<Self> {
        if l1 < l2 || l2 < 0 {
            return Err(Error::InvalidInput("partition must satisfy l1 >= l2 >= 0"));
        }
        Ok(Partition2 { l1, l2 })
    }

    /// `s = (l1 + g/2, l2 - g/2)`.
    pub fn s(&self, g: f64) -> [f64; 2] {
        [self.l1 as f64 + 0.5 * g, self.l2 as f64 - 0.5 * g]
    }
}

/// One circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleConfig {
    pub radius: f64,
    pub nodes: usize,
}

impl CircleConfig {
    /// Radius `p^{-1/2}`, or 2 when `p = 0`.
    pub fn default_for(p: f64) -> Self {
        let radius = if p > 0.0 { p.powf(-0.5) } else { 2.0 };
        CircleConfig { radius, nodes: 256 }
    }

    fn check(&self, p: f64) -> Result<()> {
        check_nodes(self.nodes)?;
        if !(self.radius > 1.0) || !(self.radius * p < 1.0) {
            return Err(Error::RadiusWindow);
        }
        Ok(())
    }
}

/// Two nested circles `1 < r1 < r2 < 1/p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourConfig {
    pub r1: f64,
    pub r2: f64,
    pub nodes: usize,
}

impl ContourConfig {
    /// `(p^{-1/3}, p^{-2/3})`, or `(2, 4)` when `p = 0`.
    pub fn default_for(p: f64) -> Self {
        if p > 0.0 {
            ContourConfig { r1: p.powf(-1.0 / 3.0), r2: p.powf(-2.0 / 3.0), nodes: 256 }
        } else {
            ContourConfig { r1: 2.0, r2: 4.0, nodes: 256 }
        }
    }

    fn check(&self, p: f64) -> Result<()> {
        check_nodes(self.nodes)?;
        if !(1.0 < self.r1 && self.r1 < self.r2 && self.r2 * p < 1.0) {
            return Err(Error::RadiusWindow);
        }
        Ok(())
    }
}

fn check_nodes(n: usize) -> Result<()> {
    if n < 64 || !n.is_power_of_two() {
        return Err(Error::InvalidInput("nodes must be a power of two, at least 64"));
    }
    Ok(())
}

/// A contour value with its node-doubling change.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourValue {
    pub value: C64,
    pub delta: f64,
}

/// Value and `x`-derivatives of a two-variable function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourJet {
    pub value: C64,
    pub d1: [C64; 2],
    pub d2: [C64; 2],
    /// `d/dtau` at fixed `x`, where available.
    pub dtau: Option<C64>,
}

fn certified(fine: C64, coarse: C64) -> Result<ContourValue> {
    let delta = (fine - coarse).norm();
    if !(delta <= QUAD_TOL) {
        return Err(Error::Quadrature { delta });
    }
    Ok(ContourValue { value: fine, delta })
}

/// Winding number of `exp(log)` along a closed sequence of nodes.
fn winding(logs: &[C64]) -> i64 {
    let n = logs.len();
    let mut tot = 0.0;
    for k in 0..n {
        let d = logs[(k + 1) % n].im - logs[k].im;
        tot += d - 2.0 * PI * (d / (2.0 * PI)).round();
    }
    (tot / (2.0 * PI)).round() as i64
}

fn theta_along(ws: impl Iterator<Item = C64>, p: f64, pol: &Truncation) -> Result<Vec<ThetaLogJet>> {
    let v: Vec<ThetaLogJet> = ws.map(|w| log_theta_q(w, p, pol)).collect::<Result<_>>()?;
    let logs: Vec<C64> = v.iter().map(|j| j.log).collect();
    if winding(&logs) != 0 {
        return Err(Error::Winding);
    }
    Ok(v)
}

fn roots_of_unity(n: usize) -> Vec<C64> {
    (0..n).map(|k| C64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)).collect()
}

/// `xi^a` at node `k` of a circle of radius `r`.
fn node_pow(r: f64, a: i64, k: usize, om: &[C64]) -> C64 {
    let n = om.len() as i64;
    om[(a * k as i64).rem_euclid(n) as usize] * r.powi(a as i32)
}

/// `K_{N,M}(x, y) = prod_{i<j} theta1(x_i-x_j)^g prod_{i<j} theta1(y_i-y_j)^g / prod_{i,j} theta1(x_i-y_j)^g`.
pub fn kernel_k(spec: &KernelSpec, x: &[C64], y: &[C64], dom: &EllipticDomain, pol: &Truncation) -> Result<C64> {
    if x.len() != spec.n || y.len() != spec.m {
        return Err(Error::InvalidInput("coordinate counts do not match (N, M)"));
    }
    let g = spec.g;
    let mut v = c(1.0);
    if g == 0.0 {
        return Ok(v);
    }
    for set in [x, y] {
        for i in 0..set.len() {
            for j in i + 1..set.len() {
                v *= theta1_pow(set[i] - set[j], g, dom, pol)?;
            }
        }
    }
    for &a in x {
        for &b in y {
            v /= theta1_pow(a - b, g, dom, pol)?;
        }
    }
    Ok(v)
}

fn single_sum(lam: i64, z: [C64; 2], g: f64, dom: &EllipticDomain, radius: f64, nodes: usize, pol: &Truncation) -> Result<ContourJet> {
    let p = dom.p();
    let om = roots_of_unity(nodes);
    let k1 = I * (PI / dom.ell());
    let th: Vec<Vec<ThetaLogJet>> = z
        .iter()
        .map(|&zs| theta_along(om.iter().map(|&o| zs / (o * radius)), p, pol))
        .collect::<Result<_>>()?;
    let mut v = c(0.0);
    let mut d1 = [c(0.0); 2];
    let mut d2 = [c(0.0); 2];
    let mut dt = c(0.0);
    for k in 0..nodes {
        let f = node_pow(radius, lam, k, &om) * (-(th[0][k].log + th[1][k].log) * g).exp();
        v += f;
        for s in 0..2 {
            let a = -k1 * th[s][k].d1 * g;
            let b = -k1 * k1 * th[s][k].d2 * g;
            d1[s] += f * a;
            d2[s] += f * (a * a + b);
        }
        dt += f * (th[0][k].pd + th[1][k].pd) * (-g * 2.0 * PI) * I;
    }
    let nf = nodes as f64;
    Ok(ContourJet { value: v / nf, d1: [d1[0] / nf, d1[1] / nf], d2: [d2[0] / nf, d2[1] / nf], dtau: Some(dt / nf) })
}

/// `(z1 z2)^{lambda2}` times the jet of the circle average.
fn with_prefactor(j: ContourJet, lam2: i64, z: [C64; 2], ell: f64) -> ContourJet {
    let a = I * (PI / ell) * lam2 as f64;
    let pre = (z[0] * z[1]).powi(lam2 as i32);
    let mut d1 = [c(0.0); 2];
    let mut d2 = [c(0.0); 2];
    for s in 0..2 {
        d1[s] = pre * (j.d1[s] + j.value * a);
        d2[s] = pre * (j.d2[s] + j.d1[s] * a * 2.0 + j.value * a * a);
    }
    ContourJet { value: pre * j.value, d1, d2, dtau: j.dtau.map(|t| t * pre) }
}

/// `P(z) = (z1 z2)^{lambda2} <xi^lambda prod_i theta(z_i/xi; p)^{-g}>` over `|xi| = r`.
pub fn n2_single_contour_p(
    lambda: i64,
    lambda2: i64,
    z: [C64; 2],
    g: f64,
    dom: &EllipticDomain,
    cfg: &CircleConfig,
    pol: &Truncation,
) -> Result<ContourValue> {
    cfg.check(dom.p())?;
    let pre = (z[0] * z[1]).powi(lambda2 as i32);
    let coarse = single_sum(lambda, z, g, dom, cfg.radius, cfg.nodes, pol)?.value;
    let fine = single_sum(lambda, z, g, dom, cfg.radius, 2 * cfg.nodes, pol)?.value;
    certified(fine * pre, coarse * pre)
}

/// Jet in `x` (with `z_j = e^{i pi x_j / l}`) and tau-derivative of the single-contour `P`.
pub fn single_contour_jet(
    lambda: i64,
    lambda2: i64,
    x: [C64; 2],
    g: f64,
    dom: &EllipticDomain,
    cfg: &CircleConfig,
    pol: &Truncation,
) -> Result<ContourJet> {
    cfg.check(dom.p())?;
    let z = [dom.z(x[0]), dom.z(x[1])];
    let j = single_sum(lambda, z, g, dom, cfg.radius, cfg.nodes, pol)?;
    Ok(with_prefactor(j, lambda2, z, dom.ell()))
}

/// The single-contour `P` as a field of `x`.
pub struct SingleContourField {
    pub lambda: i64,
    pub lambda2: i64,
    pub g: f64,
    pub dom: EllipticDomain,
    pub cfg: CircleConfig,
    pub pol: Truncation,
}

impl SmoothField for SingleContourField {
    fn dim(&self) -> usize {
        2
    }
    fn value(&self, x: &[C64]) -> Result<C64> {
        Ok(single_contour_jet(self.lambda, self.lambda2, [x[0], x[1]], self.g, &self.dom, &self.cfg, &self.pol)?.value)
    }
    fn analytic_jet(&self, x: &[C64]) -> Option<Result<Jet>> {
        Some(
            single_contour_jet(self.lambda, self.lambda2, [x[0], x[1]], self.g, &self.dom, &self.cfg, &self.pol)
                .map(|j| Jet { value: j.value, d1: j.d1.to_vec(), d2: j.d2.to_vec() }),
        )
    }
    fn dtau(&self, x: &[C64]) -> Option<Result<C64>> {
        Some(
            single_contour_jet(self.lambda, self.lambda2, [x[0], x[1]], self.g, &self.dom, &self.cfg, &self.pol)
                .map(|j| j.dtau.unwrap_or(c(0.0))),
        )
    }
}


struct Grid {
    om: Vec<C64>,
    r: [f64; 2],
    /// `theta(xi1/xi2)^g` as a function of `i - j`.
    t: Vec<C64>,
    /// `prod_s theta(z_s/xi_c)^{-g}` on circle `c`.
    h: [Vec<C64>; 2],
    /// First and second log-derivative weights `[circle][particle]`.
    a: [[Vec<C64>; 2]; 2],
    a2: [[Vec<C64>; 2]; 2],
}

fn grid(z: [C64; 2], g: f64, dom: &EllipticDomain, cfg: &ContourConfig, nodes: usize, pol: &Truncation) -> Result<Grid> {
    let p = dom.p();
    let om = roots_of_unity(nodes);
    let k1 = I * (PI / dom.ell());
    let ratio = cfg.r1 / cfg.r2;
    let t: Vec<C64> = theta_along(om.iter().map(|&o| o * ratio), p, pol)?
        .iter()
        .map(|j| (j.log * g).exp())
        .collect();
    let mut h = [vec![c(1.0); nodes], vec![c(1.0); nodes]];
    let mut a = [[vec![c(0.0); nodes], vec![c(0.0); nodes]], [vec![c(0.0); nodes], vec![c(0.0); nodes]]];
    let mut a2 = a.clone();
    for (ci, &r) in [cfg.r1, cfg.r2].iter().enumerate() {
        for s in 0..2 {
            let th = theta_along(om.iter().map(|&o| z[s] / (o * r)), p, pol)?;
            for k in 0..nodes {
                h[ci][k] *= (-th[k].log * g).exp();
                let d = -k1 * th[k].d1 * g;
                a[ci][s][k] = d;
                a2[ci][s][k] = d * d - k1 * k1 * th[k].d2 * g;
            }
        }
    }
    Ok(Grid { om, r: [cfg.r1, cfg.r2], t, h, a, a2 })
}

/// `sum_terms coef <xi1^a xi2^b G>` and its `x`-derivatives.
fn moments(gr: &Grid, terms: &[(i64, i64, C64)], skip_negative_b: bool) -> ContourJet {
    let n = gr.om.len();
    let mut v = c(0.0);
    let mut d1 = [c(0.0); 2];
    let mut d2 = [c(0.0); 2];
    for &(ea, eb, coef) in terms {
        if coef == c(0.0) || (skip_negative_b && eb < 0) {
            continue;
        }
        // inner weights: 1, a_s, a2_s on circle 2
        let mut inner = [vec![c(0.0); n], vec![c(0.0); n], vec![c(0.0); n], vec![c(0.0); n], vec![c(0.0); n]];
        let y: Vec<C64> = (0..n).map(|j| node_pow(gr.r[1], eb, j, &gr.om) * gr.h[1][j]).collect();
        for i in 0..n {
            let mut acc = [c(0.0); 5];
            for j in 0..n {
                let w = gr.t[(i + n - j) % n] * y[j];
                acc[0] += w;
                acc[1] += w * gr.a[1][0][j];
                acc[2] += w * gr.a[1][1][j];
                acc[3] += w * gr.a2[1][0][j];
                acc[4] += w * gr.a2[1][1][j];
            }
            for q in 0..5 {
                inner[q][i] = acc[q];
            }
        }
        for i in 0..n {
            let xw = node_pow(gr.r[0], ea, i, &gr.om) * gr.h[0][i] * coef;
            v += xw * inner[0][i];
            for s in 0..2 {
                let al = gr.a[0][s][i];
                d1[s] += xw * (inner[0][i] * al + inner[1 + s][i]);
                d2[s] += xw * (inner[0][i] * gr.a2[0][s][i] + inner[1 + s][i] * al * 2.0 + inner[3 + s][i]);
            }
        }
    }
    let nf = (n * n) as f64;
    ContourJet { value: v / nf, d1: [d1[0] / nf, d1[1] / nf], d2: [d2[0] / nf, d2[1] / nf], dtau: None }
}

/// `F_{a,b}(z) = <xi1^a xi2^b theta(xi1/xi2)^g / prod_{i,j} theta(z_i/xi_j)^g>`
/// over `|xi1| = r1`, `|xi2| = r2`. At `p = 0` it vanishes for `b < 0`.
pub fn contour_f(
    ab: (i64, i64),
    z: [C64; 2],
    g: f64,
    dom: &EllipticDomain,
    cfg: &ContourConfig,
    pol: &Truncation,
) -> Result<ContourValue> {
    cfg.check(dom.p())?;
    let terms = [(ab.0, ab.1, c(1.0))];
    let triv = dom.is_trigonometric();
    let coarse = moments(&grid(z, g, dom, cfg, cfg.nodes, pol)?, &terms, triv).value;
    let fine = moments(&grid(z, g, dom, cfg, 2 * cfg.nodes, pol)?, &terms, triv).value;
    certified(fine, coarse)
}

fn check_table(lambda: &Partition2, t: &PSeriesTable, g: f64, k: usize) -> Result<()> {
    let s = lambda.s(g);
    if (t.s[0] - s[0]).abs() > 1e-14 || (t.s[1] - s[1]).abs() > 1e-14 {
        return Err(Error::Mismatch("table s does not match (l1 + g/2, l2 - g/2)"));
    }
    if (t.gamma - g * (g - 1.0)).abs() > 1e-14 * t.gamma.abs().max(1.0) {
        return Err(Error::Mismatch("table gamma does not match g(g-1)"));
    }
    if t.gauge != Gauge::I || t.kappa != c(0.0) {
        return Err(Error::Mismatch("table must be the stationary gauge I solution"));
    }
    if k > t.k_max {
        return Err(Error::Mismatch("truncation order exceeds the table"));
    }
    Ok(())
}

fn assembly_terms(lambda: &Partition2, t: &PSeriesTable, k: usize, p: f64) -> Vec<(i64, i64, C64)> {
    let mut coef: alloc::collections::BTreeMap<i64, C64> = Default::default();
    for (n, kk, a) in t.entries() {
        if kk <= k && n <= t.n_cap as i64 {
            *coef.entry(n).or_insert(c(0.0)) += a * p.powi(kk as i32);
        }
    }
    coef.into_iter().map(|(n, v)| (lambda.l1 + n, lambda.l2 - n, v)).collect()
}

/// `P = sum_{k <= K} sum_n a_{n,k} F_{l1+n, l2-n} p^k`.
pub fn assemble_p_lambda(
    lambda: &Partition2,
    table: &PSeriesTable,
    k: usize,
    z: [C64; 2],
    g: f64,
    dom: &EllipticDomain,
    cfg: &ContourConfig,
    pol: &Truncation,
) -> Result<ContourValue> {
    check_table(lambda, table, g, k)?;
    cfg.check(dom.p())?;
    let terms = assembly_terms(lambda, table, k, dom.p());
    let triv = dom.is_trigonometric();
    let coarse = moments(&grid(z, g, dom, cfg, cfg.nodes, pol)?, &terms, triv).value;
    let fine = moments(&grid(z, g, dom, cfg, 2 * cfg.nodes, pol)?, &terms, triv).value;
    certified(fine, coarse)
}

/// Jet in `x` of the assembled `P`, at the configured node count.
pub fn assembled_jet(
    lambda: &Partition2,
    table: &PSeriesTable,
    k: usize,
    x: [C64; 2],
    g: f64,
    dom: &EllipticDomain,
    cfg: &ContourConfig,
    pol: &Truncation,
) -> Result<ContourJet> {
    check_table(lambda, table, g, k)?;
    cfg.check(dom.p())?;
    let z = [dom.z(x[0]), dom.z(x[1])];
    let terms = assembly_terms(lambda, table, k, dom.p());
    Ok(moments(&grid(z, g, dom, cfg, cfg.nodes, pol)?, &terms, dom.is_trigonometric()))
}

/// `|(H - E) psi0 P| / |psi0 P|` at `x` with `E = (pi/l)^2 sum_{k<=K} eps_k p^k`.
pub fn eigen_residual(
    lambda: &Partition2,
    table: &PSeriesTable,
    k: usize,
    x: [C64; 2],
    g: f64,
    dom: &EllipticDomain,
    cfg: &ContourConfig,
    pol: &Truncation,
) -> Result<f64> {
    let j = assembled_jet(lambda, table, k, x, g, dom, cfg, pol)?;
    let gs = crate::field::GroundState { n: 2, g, dom: *dom, pol: *pol };
    let (l1, l2) = gs.log_derivs(&x)?;
    let mut lap = c(0.0);
    for s in 0..2 {
        lap += l2[s] + l1[s] * l1[s] + l1[s] * j.d1[s] * 2.0 / j.value + j.d2[s] / j.value;
    }
    let p = dom.p();
    let mut eps = c(0.0);
    for kk in 0..=k {
        eps += table.eps[kk] * p.powi(kk as i32);
    }
    let e = eps * (PI / dom.ell()).powi(2);
    let v = crate::kernels::wp1(x[0] - x[1], dom, pol)? * (g * (g - 1.0));
    Ok((-lap * 0.5 + v - e).norm())
}

/// `< prod_i theta1(x_i - y)^{-g} source(y) >` over the circle `|e^{i pi y/l}| = r`,
/// i.e. the transform with `K_{N,1}` divided by its `y`-independent factor.
///
/// `theta1(x - y)^{-g}` is continued along the contour from `y` at angle 0;
/// if the integrand does not return to its starting value after a full turn
/// the contour is not closed and `SeamMismatch` is returned.
pub fn kernel_transform(
    spec: &KernelSpec,
    source: &dyn Fn(C64) -> Result<C64>,
    cfg: &CircleConfig,
    x: &[C64],
    dom: &EllipticDomain,
    pol: &Truncation,
) -> Result<ContourValue> {
    if spec.m != 1 || x.len() != spec.n {
        return Err(Error::InvalidInput("kernel_transform needs M = 1 and N coordinates"));
    }
    cfg.check(dom.p())?;
    let (ell, p, g) = (dom.ell(), dom.p(), spec.g);
    let y_of = |phi: f64| C64::new(ell * phi / PI, -ell * cfg.radius.ln() / PI);
    let run = |nodes: usize| -> Result<(C64, C64, C64)> {
        let mut logs: Vec<Vec<ThetaLogJet>> = Vec::with_capacity(x.len());
        for &xs in x {
            let zs = dom.z(xs);
            logs.push(theta_along((0..nodes).map(|k| zs / (dom.z(y_of(2.0 * PI * k as f64 / nodes as f64)))), p, pol)?);
        }
        let integrand = |phi: f64, k: usize| -> Result<C64> {
            let y = y_of(phi);
            let mut l = c(0.0);
            for (s, &xs) in x.iter().enumerate() {
                l += I * (PI / 2.0) - I * (PI / (2.0 * ell)) * (xs - y) + logs[s][k].log;
            }
            Ok((-l * g).exp() * source(y)?)
        };
        let mut acc = c(0.0);
        for k in 0..nodes {
            acc += integrand(2.0 * PI * k as f64 / nodes as f64, k)?;
        }
        Ok((acc / nodes as f64, integrand(0.0, 0)?, integrand(2.0 * PI, 0)?))
    };
    let (coarse, start, end) = run(cfg.nodes)?;
    let jump = (end - start).norm();
    if jump > SEAM_TOL * start.norm().max(1.0) {
        return Err(Error::SeamMismatch { jump });
    }
    let (fine, _, _) = run(2 * cfg.nodes)?;
    certified(fine, coarse)
}
