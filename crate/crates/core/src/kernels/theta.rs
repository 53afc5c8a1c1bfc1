use crate::domain::{EllipticDomain, Truncation};
use crate::prelude::*;

const POLE_TOL: f64 = 1e-12;

/// Distance from `x` to the nearest point of the lattice `2l Z + 2i delta Z`.
pub fn lattice_distance(x: C64, dom: &EllipticDomain) -> f64 {
    let l2 = 2.0 * dom.ell();
    let re = x.re - l2 * (x.re / l2).round();
    let im = if dom.is_trigonometric() {
        x.im
    } else {
        let d2 = 2.0 * dom.delta();
        x.im - d2 * (x.im / d2).round()
    };
    re.hypot(im)
}

fn check_lattice(x: C64, dom: &EllipticDomain) -> Result<()> {
    if lattice_distance(x, dom) < POLE_TOL * dom.ell() {
        Err(Error::Pole)
    } else {
        Ok(())
    }
}

fn arg_scale(z: C64) -> f64 {
    let r = z.norm();
    r.max(1.0 / r)
}

/// `theta(z; p) = (1 - z) prod_{n>=1} (1 - p^n z)(1 - p^n / z)`.
pub fn theta_q(z: C64, p: f64, pol: &Truncation) -> Result<C64> {
    if z == C64::new(0.0, 0.0) {
        return Err(Error::ZeroArgument);
    }
    let nt = pol.terms(p, arg_scale(z), 0)?;
    let zi = z.inv();
    let mut acc = c(1.0) - z;
    let mut pn = 1.0;
    for _ in 0..nt {
        pn *= p;
        acc *= (c(1.0) - z * pn) * (c(1.0) - zi * pn);
    }
    Ok(acc)
}

/// Logarithm of `theta(w; p)` and its Euler derivatives, valid on the annulus
/// `p < |w| < 1` where every factor `1 - u` has `|u| < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaLogJet {
    /// Sum of principal logarithms of the factors.
    pub log: C64,
    /// `w d/dw log theta`.
    pub d1: C64,
    /// `(w d/dw)^2 log theta`.
    pub d2: C64,
    /// `p d/dp log theta` at fixed `w`.
    pub pd: C64,
}

/// See [`ThetaLogJet`]. Outside the annulus the factor-wise logarithm is not
/// a continuous branch and `BranchAmbiguity` is returned.
pub fn log_theta_q(w: C64, p: f64, pol: &Truncation) -> Result<ThetaLogJet> {
    let r = w.norm();
    if !(r < 1.0) || !(r > p) {
        return Err(Error::BranchAmbiguity);
    }
    let nt = pol.terms(p, arg_scale(w), 2)?;
    let wi = w.inv();
    let one = c(1.0);
    let mut log = (one - w).ln();
    let mut d1 = -w / (one - w);
    let mut d2 = -w / ((one - w) * (one - w));
    let mut pd = c(0.0);
    let mut pn = 1.0;
    for n in 1..=nt {
        pn *= p;
        let u = w * pn;
        let v = wi * pn;
        let nf = n as f64;
        log += (one - u).ln() + (one - v).ln();
        // u ~ w^1, v ~ w^-1
        d1 += -u / (one - u) + v / (one - v);
        d2 += -u / ((one - u) * (one - u)) - v / ((one - v) * (one - v));
        pd += -(u / (one - u) + v / (one - v)) * nf;
    }
    Ok(ThetaLogJet { log, d1, d2, pd })
}

/// `w d/dw log theta(w; p)` anywhere off the zeros, no branch involved.
pub fn dlog_theta_q(w: C64, p: f64, pol: &Truncation) -> Result<C64> {
    if w == C64::new(0.0, 0.0) {
        return Err(Error::ZeroArgument);
    }
    let nt = pol.terms(p, arg_scale(w), 1)?;
    let wi = w.inv();
    let one = c(1.0);
    if (one - w).norm() < POLE_TOL {
        return Err(Error::Pole);
    }
    let mut d1 = -w / (one - w);
    let mut pn = 1.0;
    for _ in 0..nt {
        pn *= p;
        let u = w * pn;
        let v = wi * pn;
        if (one - u).norm() < POLE_TOL || (one - v).norm() < POLE_TOL {
            return Err(Error::Pole);
        }
        d1 += -u / (one - u) + v / (one - v);
    }
    Ok(d1)
}

/// Factors `(w_n, v_n) = (p^n z, p^n / z)` for `n = 1..N` at `x`.
fn factors(x: C64, dom: &EllipticDomain, pol: &Truncation, weight: i32) -> Result<(C64, Vec<(f64, C64, C64)>)> {
    let z = dom.z(x);
    let nt = pol.terms(dom.p(), arg_scale(z), weight)?;
    let zi = z.inv();
    let mut out = Vec::with_capacity(nt);
    let mut pn = 1.0;
    for n in 1..=nt {
        pn *= dom.p();
        out.push((n as f64, z * pn, zi * pn));
    }
    Ok((z, out))
}

/// `theta1(x) = 2 sin(pi x / 2l) prod (1 - p^n z)(1 - p^n / z)`.
pub fn theta1(x: C64, dom: &EllipticDomain, pol: &Truncation) -> Result<C64> {
    let (_, fs) = factors(x, dom, pol, 0)?;
    let mut acc = (x * (PI / (2.0 * dom.ell()))).sin() * 2.0;
    for (_, w, v) in fs {
        acc *= (c(1.0) - w) * (c(1.0) - v);
    }
    Ok(acc)
}

/// `zeta1 = theta1' / theta1`, term-wise derivative of the product.
pub fn zeta1(x: C64, dom: &EllipticDomain, pol: &Truncation) -> Result<C64> {
    check_lattice(x, dom)?;
    let (_, fs) = factors(x, dom, pol, 1)?;
    let k = PI / (2.0 * dom.ell());
    let mut acc = (x * k).cos() / (x * k).sin() * k;
    let one = c(1.0);
    let mut s = c(0.0);
    for (_, w, v) in fs {
        s += -w / (one - w) + v / (one - v);
    }
    acc += s * I * (PI / dom.ell());
    Ok(acc)
}

/// `zeta1` from its sine series, an independent route used for certificates.
/// Needs `|Im x| < 2 delta`.
pub fn zeta1_fourier(x: C64, dom: &EllipticDomain, pol: &Truncation) -> Result<C64> {
    check_lattice(x, dom)?;
    let k = PI / (2.0 * dom.ell());
    let mut acc = (x * k).cos() / (x * k).sin() * k;
    let p = dom.p();
    if p == 0.0 {
        return Ok(acc);
    }
    let peff = p * (PI * x.im.abs() / dom.ell()).exp();
    if !(peff < 1.0) {
        return Err(Error::InvalidInput("sine series needs |Im x| < 2 delta"));
    }
    let nt = pol.terms(peff, 1.0 / (1.0 - p), 0)?.max(1);
    let mut pm = 1.0;
    let mut s = c(0.0);
    for m in 1..=nt {
        pm *= p;
        let qm = pm / (1.0 - pm);
        s += (x * (m as f64 * PI / dom.ell())).sin() * qm;
    }
    acc += s * (2.0 * PI / dom.ell());
    Ok(acc)
}

/// `-d^2/dx^2 log theta1(x)`, the same function as `wp1` but through the
/// Lambert form of the product.
pub fn theta1_neg_d2log(x: C64, dom: &EllipticDomain, pol: &Truncation) -> Result<C64> {
    check_lattice(x, dom)?;
    let (_, fs) = factors(x, dom, pol, 2)?;
    let k = PI / (2.0 * dom.ell());
    let sn = (x * k).sin();
    let mut acc = c(k * k) / (sn * sn);
    let one = c(1.0);
    let mut s = c(0.0);
    for (_, w, v) in fs {
        s += w / ((one - w) * (one - w)) + v / ((one - v) * (one - v));
    }
    acc -= s * (PI / dom.ell()).powi(2);
    Ok(acc)
}

/// `d/dtau log theta1(x)` at fixed `x`, using `d/dtau = 2 pi i p d/dp`.
pub fn theta1_dlog_tau(x: C64, dom: &EllipticDomain, pol: &Truncation) -> Result<C64> {
    check_lattice(x, dom)?;
    let (_, fs) = factors(x, dom, pol, 1)?;
    let one = c(1.0);
    let mut s = c(0.0);
    for (n, w, v) in fs {
        s -= (w / (one - w) + v / (one - v)) * n;
    }
    Ok(s * (2.0 * PI) * I)
}

/// `d/dtau theta1(x)`.
pub fn theta1_dtau(x: C64, dom: &EllipticDomain, pol: &Truncation) -> Result<C64> {
    let (_, fs) = factors(x, dom, pol, 1)?;
    let one = c(1.0);
    let mut s = c(0.0);
    let mut prod = (x * (PI / (2.0 * dom.ell()))).sin() * 2.0;
    for (n, w, v) in fs {
        prod *= (one - w) * (one - v);
        s -= (w / (one - w) + v / (one - v)) * n;
    }
    Ok(prod * s * (2.0 * PI) * I)
}

/// Real logarithm of `theta1(x)` for real `x` in `(0, 2l)`, where `theta1 > 0`.
pub fn theta1_ln(x: C64, dom: &EllipticDomain, pol: &Truncation) -> Result<f64> {
    if x.im != 0.0 || !(x.re > 0.0 && x.re < 2.0 * dom.ell()) {
        return Err(Error::BranchAmbiguity);
    }
    let v = theta1(x, dom, pol)?;
    if !(v.re > 0.0) {
        return Err(Error::Pole);
    }
    Ok(v.re.ln())
}

/// `theta1(x)^g`. Integer `g` needs no branch; otherwise `x` must be real in `(0, 2l)`.
pub fn theta1_pow(x: C64, g: f64, dom: &EllipticDomain, pol: &Truncation) -> Result<C64> {
    if g == g.round() && g.abs() < 1e6 {
        let v = theta1(x, dom, pol)?;
        if g < 0.0 && v.norm() == 0.0 {
            return Err(Error::Pole);
        }
        return Ok(v.powi(g as i32));
    }
    Ok(c((g * theta1_ln(x, dom, pol)?).exp()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dom(p: f64) -> EllipticDomain {
        EllipticDomain::from_nome(1.0, p).unwrap()
    }

    #[test]
    fn theta_q_at_zero_nome() {
        let z = C64::new(0.3, -0.4);
        let v = theta_q(z, 0.0, &Truncation::default()).unwrap();
        assert_eq!(v, c(1.0) - z);
        assert_eq!(theta_q(c(1.0), 0.3, &Truncation::default()).unwrap(), c(0.0));
        assert_eq!(theta_q(c(0.0), 0.3, &Truncation::default()), Err(Error::ZeroArgument));
    }

    #[test]
    fn theta_q_shift() {
        let pol = Truncation::default();
        let z = C64::new(0.7, 0.1);
        let p = 0.1;
        let lhs = theta_q(z * p, p, &pol).unwrap();
        let rhs = -z.inv() * theta_q(z, p, &pol).unwrap();
        assert!((lhs - rhs).norm() <= 1e-14 * rhs.norm());
    }

    #[test]
    fn theta1_matches_theta_q() {
        let pol = Truncation::default();
        let d = dom(0.2);
        let x = C64::new(0.37, 0.11);
        let z = d.z(x);
        let via = I * z.sqrt().inv() * theta_q(z, d.p(), &pol).unwrap();
        let direct = theta1(x, &d, &pol).unwrap();
        assert!((via - direct).norm() < 1e-14 * direct.norm());
    }

    #[test]
    fn zeta_routes_agree() {
        let pol = Truncation::default();
        let d = dom(0.05);
        for &x in &[C64::new(0.25, 0.0), C64::new(0.6, 0.2), C64::new(-1.3, -0.15)] {
            let a = zeta1(x, &d, &pol).unwrap();
            let b = zeta1_fourier(x, &d, &pol).unwrap();
            assert!((a - b).norm() < 1e-12, "{a} {b}");
        }
    }

    #[test]
    fn zeta_pole() {
        let pol = Truncation::default();
        assert_eq!(zeta1(c(2.0), &dom(0.1), &pol), Err(Error::Pole));
    }

    #[test]
    fn log_jet_matches_value() {
        let pol = Truncation::default();
        let w = C64::new(0.3, 0.2);
        let j = log_theta_q(w, 0.05, &pol).unwrap();
        let v = theta_q(w, 0.05, &pol).unwrap();
        assert!((j.log.exp() - v).norm() < 1e-14);
        let h = 1e-5;
        let lp = log_theta_q(w * (h as f64).exp(), 0.05, &pol).unwrap().log;
        let lm = log_theta_q(w * (-h as f64).exp(), 0.05, &pol).unwrap().log;
        assert!(((lp - lm) / (2.0 * h) - j.d1).norm() < 1e-8);
        assert!(((lp - j.log * 2.0 + lm) / (h * h) - j.d2).norm() < 1e-4);
        assert_eq!(log_theta_q(c(1.5), 0.05, &pol), Err(Error::BranchAmbiguity));
    }

    #[test]
    fn fractional_power_branch() {
        let pol = Truncation::default();
        let d = dom(0.1);
        assert!(theta1_pow(c(0.5), 0.5, &d, &pol).is_ok());
        assert_eq!(theta1_pow(C64::new(0.5, 0.1), 0.5, &d, &pol), Err(Error::BranchAmbiguity));
        assert_eq!(theta1_pow(c(-0.5), 0.5, &d, &pol), Err(Error::BranchAmbiguity));
        assert!(theta1_pow(C64::new(0.5, 0.1), 2.0, &d, &pol).is_ok());
    }
}
