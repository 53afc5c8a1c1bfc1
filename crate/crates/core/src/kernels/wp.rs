use super::theta::{lattice_distance, theta1_dlog_tau, theta1_neg_d2log, zeta1};
use crate::domain::{EllipticDomain, Truncation};
use crate::prelude::*;

/// Trigonometric potential `(pi/2l)^2 / sin^2(pi x / 2l)`.
pub fn wp1_trig(x: C64, ell: f64) -> C64 {
    let k = PI / (2.0 * ell);
    let s = (x * k).sin();
    c(k * k) / (s * s)
}

/// Move `x` to `|Re x| <= l`, `|Im x| <= delta` using the periods.
fn reduce(x: C64, dom: &EllipticDomain) -> C64 {
    let l2 = 2.0 * dom.ell();
    let mut re = x.re - l2 * (x.re / l2).round();
    if re > dom.ell() {
        re -= l2;
    }
    let im = if dom.is_trigonometric() {
        x.im
    } else {
        let d2 = 2.0 * dom.delta();
        x.im - d2 * (x.im / d2).round()
    };
    C64::new(re, im)
}

/// `wp1(x)`, doubly periodic with a double pole on the lattice.
///
/// Evaluated from the cosine series
/// `(pi/2l)^2/sin^2(pi x/2l) - 2 (pi/l)^2 sum m p^m/(1-p^m) cos(m pi x/l)`
/// after moving `x` into the fundamental strip.
pub fn wp1(x: C64, dom: &EllipticDomain, pol: &Truncation) -> Result<C64> {
    if lattice_distance(x, dom) < 1e-12 * dom.ell() {
        return Err(Error::Pole);
    }
    let x = reduce(x, dom);
    let mut acc = wp1_trig(x, dom.ell());
    let p = dom.p();
    if p == 0.0 {
        return Ok(acc);
    }
    // |Im x| <= delta, so p^m |cos| <= p^(m/2)
    let ph = p.sqrt();
    let nt = pol.terms(ph, (PI / dom.ell()).powi(2) * 2.0 / (1.0 - p), 1)?.max(1);
    let mut pm = 1.0;
    let mut s = c(0.0);
    for m in 1..=nt {
        pm *= p;
        let mf = m as f64;
        s += (x * (mf * PI / dom.ell())).cos() * (mf * pm / (1.0 - pm));
    }
    acc -= s * (2.0 * (PI / dom.ell()).powi(2));
    Ok(acc)
}

/// Half-period shifts `omega_0 = 0`, `omega_1 = l`, `omega_2 = i delta`,
/// `omega_3 = -l - i delta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfShift {
    Zero,
    Ell,
    IDelta,
    EllIDelta,
}

impl HalfShift {
    pub const ALL: [HalfShift; 4] = [HalfShift::Zero, HalfShift::Ell, HalfShift::IDelta, HalfShift::EllIDelta];

    /// The shift as a complex number; infinite at `p = 0` for the imaginary ones.
    pub fn omega(self, dom: &EllipticDomain) -> C64 {
        match self {
            HalfShift::Zero => c(0.0),
            HalfShift::Ell => c(dom.ell()),
            HalfShift::IDelta => C64::new(0.0, dom.delta()),
            HalfShift::EllIDelta => C64::new(-dom.ell(), -dom.delta()),
        }
    }
}

/// `wp1(x + omega)`. The shifts by `i delta` use the bilateral Lambert sum in
/// `p^(n+1/2) z`, which tends to 0 as `p -> 0`.
pub fn wp1_shifted(x: C64, shift: HalfShift, dom: &EllipticDomain, pol: &Truncation) -> Result<C64> {
    let z = match shift {
        HalfShift::Zero => return wp1(x, dom, pol),
        HalfShift::Ell => return wp1(x + dom.ell(), dom, pol),
        HalfShift::IDelta => dom.z(x),
        HalfShift::EllIDelta => -dom.z(x),
    };
    let p = dom.p();
    if p == 0.0 {
        return Ok(c(0.0));
    }
    let r = z.norm();
    let sc = r.max(1.0 / r);
    let nt = pol.terms(p, sc, 0)?;
    let zi = z.inv();
    let one = c(1.0);
    let ph = p.sqrt();
    let mut pn = ph;
    let mut s = c(0.0);
    for _ in 0..=nt {
        let a = z * pn;
        let b = zi * pn;
        if (one - a).norm() < 1e-12 || (one - b).norm() < 1e-12 {
            return Err(Error::Pole);
        }
        s += a / ((one - a) * (one - a)) + b / ((one - b) * (one - b));
        pn *= p;
    }
    Ok(-s * (PI / dom.ell()).powi(2))
}

/// `c0 = (pi/l)^2 (1/4 - 2 sum n p^n/(1-p^n))`, the constant in the heat equation.
pub fn heat_constant_c0(dom: &EllipticDomain, pol: &Truncation) -> Result<f64> {
    let p = dom.p();
    let k2 = (PI / dom.ell()).powi(2);
    let nt = pol.terms(p, 1.0 / (1.0 - p), 1)?;
    let mut pn = 1.0;
    let mut s = 0.0;
    for n in 1..=nt {
        pn *= p;
        s += n as f64 * pn / (1.0 - pn);
    }
    Ok(k2 * (0.25 - 2.0 * s))
}

/// `((i pi / l^2) d/dtau - d^2/dx^2 - c0) theta1 / theta1` at `x`.
pub fn heat_residual(x: C64, dom: &EllipticDomain, pol: &Truncation) -> Result<C64> {
    let l = dom.ell();
    let z = zeta1(x, dom, pol)?;
    let d2 = z * z - theta1_neg_d2log(x, dom, pol)?;
    let dt = theta1_dlog_tau(x, dom, pol)?;
    Ok(I * (PI / (l * l)) * dt - d2 - heat_constant_c0(dom, pol)?)
}

/// `eta1/omega1 = (pi/l)^2 (1/12 - sum p^n/(1-p^n)^2)`.
pub fn eta1_over_omega1(dom: &EllipticDomain, pol: &Truncation) -> Result<f64> {
    let p = dom.p();
    let k2 = (PI / dom.ell()).powi(2);
    let nt = pol.terms(p, 1.0 / (1.0 - p).powi(2), 0)?;
    let mut pn = 1.0;
    let mut s = 0.0;
    for _ in 1..=nt {
        pn *= p;
        s += pn / ((1.0 - pn) * (1.0 - pn));
    }
    Ok(k2 * (1.0 / 12.0 - s))
}

/// Coefficients of `u^m` and `u^-m` in the expansion
/// `wp1 = -(pi/l)^2 sum_m m (u^m + sum_nu p^(m nu) (u^m + u^-m))`, valid for
/// `p < |u| < 1`. Each coefficient is kept as a list of `(power of p, value)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoeff {
    pub m: usize,
    pub plus: Vec<(usize, f64)>,
    pub minus: Vec<(usize, f64)>,
}

impl FourierCoeff {
    fn eval(terms: &[(usize, f64)], p: f64) -> f64 {
        terms.iter().map(|&(k, v)| if k == 0 { v } else { v * p.powi(k as i32) }).sum()
    }

    pub fn plus_at(&self, p: f64) -> f64 {
        Self::eval(&self.plus, p)
    }

    pub fn minus_at(&self, p: f64) -> f64 {
        Self::eval(&self.minus, p)
    }
}

/// Fourier coefficients for `m = 1..=m_max`, p-series cut by the policy.
pub fn wp1_fourier_coeffs(dom: &EllipticDomain, pol: &Truncation, m_max: usize) -> Result<Vec<FourierCoeff>> {
    if m_max == 0 {
        return Err(Error::InvalidInput("m_max must be at least 1"));
    }
    let p = dom.p();
    let k2 = (PI / dom.ell()).powi(2);
    let mut out = Vec::with_capacity(m_max);
    for m in 1..=m_max {
        let mf = m as f64;
        let mut plus = vec![(0usize, -k2 * mf)];
        let mut minus = Vec::new();
        if p > 0.0 {
            let pm = p.powi(m as i32);
            let nt = pol.terms(pm, k2 * mf / (1.0 - pm), 0)?;
            for nu in 1..=nt.max(1) {
                plus.push((m * nu, -k2 * mf));
                minus.push((m * nu, -k2 * mf));
            }
        }
        out.push(FourierCoeff { m, plus, minus });
    }
    Ok(out)
}

/// `sum_n (pi/2 delta)^2 / sinh^2(pi (x - 2 n l) / 2 delta)`, the periodized
/// hyperbolic potential; equals `wp1` up to an additive constant.
pub fn wp1_sinh_sum(x: C64, dom: &EllipticDomain, pol: &Truncation) -> Result<C64> {
    if dom.is_trigonometric() {
        return Err(Error::InvalidInput("hyperbolic sum needs finite delta"));
    }
    if lattice_distance(x, dom) < 1e-12 * dom.ell() {
        return Err(Error::Pole);
    }
    let x = reduce(x, dom);
    let (l, d) = (dom.ell(), dom.delta());
    let pd = (-2.0 * PI * l / d).exp();
    let k = PI / (2.0 * d);
    let nt = pol.terms(pd, (k * k) * 4.0 * (PI * l / d).exp(), 0)? + 1;
    let term = |n: i64| {
        let s = ((x - 2.0 * n as f64 * l) * k).sinh();
        c(k * k) / (s * s)
    };
    let mut acc = term(0);
    for n in 1..=nt as i64 {
        acc += term(n) + term(-n);
    }
    Ok(acc)
}
