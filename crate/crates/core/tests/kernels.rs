mod common;

use common::cx;
use ellipcmr::kernels::*;
use ellipcmr::{EllipticDomain, RuijsenaarsParams, Truncation, C64};

fn dom(p: f64) -> EllipticDomain {
    EllipticDomain::from_nome(1.0, p).unwrap()
}

#[test]
fn theta_q_shift() {
    let pol = Truncation::default();
    let z = cx(0.7, 0.1);
    let p = 0.1;
    let lhs = theta_q(z * p, p, &pol).unwrap();
    let rhs = -theta_q(z, p, &pol).unwrap() / z;
    assert!((lhs - rhs).norm() < 1e-14);
    assert_eq!(theta_q(cx(1.0, 0.0), 0.3, &pol).unwrap(), cx(0.0, 0.0));
}

#[test]
fn theta1_quasi_periodicity() {
    let pol = Truncation::default();
    let d = dom(0.1);
    let x = cx(0.3, 0.1 * d.delta());
    let t = theta1(x, &d, &pol).unwrap();
    // antiperiodic in 2l: sin(pi x / 2l) changes sign
    assert!((theta1(x + 2.0, &d, &pol).unwrap() + t).norm() < 1e-12 * t.norm());
    let sh = theta1(x + cx(0.0, 2.0 * d.delta()), &d, &pol).unwrap();
    let want = -t * (std::f64::consts::PI * d.delta()).exp() * (-cx(0.0, std::f64::consts::PI) * x).exp();
    assert!((sh - want).norm() < 1e-12 * want.norm());
}

#[test]
fn zeta_against_difference_quotient() {
    let pol = Truncation::default();
    let d = dom(0.05);
    let x = cx(0.25, 0.0);
    let h = 1e-3;
    let f = |t: f64| theta1_ln(cx(t, 0.0), &d, &pol).unwrap();
    let d1 = |h: f64| (f(0.25 + h) - f(0.25 - h)) / (2.0 * h);
    let rich = (4.0 * d1(h / 2.0) - d1(h)) / 3.0;
    assert!((zeta1(x, &d, &pol).unwrap().re - rich).abs() < 1e-8);
    let y = cx(0.4, 0.0);
    assert!((zeta1(-y, &d, &pol).unwrap() + zeta1(y, &d, &pol).unwrap()).norm() < 1e-13);
    assert!((zeta1(y + 2.0, &d, &pol).unwrap() - zeta1(y, &d, &pol).unwrap()).norm() < 1e-12);
}

#[test]
fn wp_double_periodicity_and_link() {
    let pol = Truncation::default();
    for p in [0.05, 0.2] {
        let d = dom(p);
        for x in [cx(0.3, 0.1), cx(0.77, -0.2), cx(1.4, 0.05)] {
            let w = wp1(x, &d, &pol).unwrap();
            assert!((wp1(x + 2.0, &d, &pol).unwrap() - w).norm() < 1e-11 * w.norm());
            assert!((wp1(x + cx(0.0, 2.0 * d.delta()), &d, &pol).unwrap() - w).norm() < 1e-11 * w.norm());
            assert!((theta1_neg_d2log(x, &d, &pol).unwrap() - w).norm() < 1e-10 * w.norm());
        }
    }
}

#[test]
fn wp_trigonometric_limit() {
    let pol = Truncation::default();
    let d = EllipticDomain::new(1.0, f64::INFINITY).unwrap();
    let x = cx(0.3, 0.0);
    let k = std::f64::consts::PI / 2.0;
    let want = k * k / (k * 0.3).sin().powi(2);
    assert!((wp1(x, &d, &pol).unwrap().re - want).abs() < 1e-12);
}

#[test]
fn fourier_reconstruction() {
    let pol = Truncation::default();
    let d = dom(0.05);
    // needs p < |u| < 1, hence a point above the real axis
    let x = cx(0.3, 0.5 * d.delta());
    let u = d.z(x);
    let cf = wp1_fourier_coeffs(&d, &pol, 400).unwrap();
    let mut s = cx(0.0, 0.0);
    for f in &cf {
        s += u.powi(f.m as i32) * f.plus_at(0.05) + u.powi(-(f.m as i32)) * f.minus_at(0.05);
    }
    let w = wp1(x, &d, &pol).unwrap();
    assert!((s - w).norm() < 1e-10 * w.norm().max(1.0), "{s} {w}");
    for f in &cf[..5] {
        for (a, b) in f.plus[1..].iter().zip(&f.minus) {
            assert_eq!(a, b);
        }
    }
}

#[test]
fn heat_equation_and_c0() {
    let pol = Truncation::default();
    let d = dom(0.1);
    let k2 = std::f64::consts::PI.powi(2);
    let c0 = heat_constant_c0(&d, &pol).unwrap();
    assert!((c0 - 2.0 * eta1_over_omega1(&d, &pol).unwrap() - k2 / 12.0).abs() < 1e-12);
    assert!((heat_constant_c0(&dom(0.0), &pol).unwrap() - k2 / 4.0).abs() < 1e-14);
    assert!(heat_residual(cx(0.37, 0.0), &d, &pol).unwrap().norm() < 1e-8);
}

#[test]
fn dtau_against_delta_difference() {
    let pol = Truncation::default();
    let x = cx(0.37, 0.1);
    let delta = 0.4;
    let h = 1e-4;
    let f = |dl: f64| theta1(x, &EllipticDomain::new(1.0, dl).unwrap(), &pol).unwrap();
    // tau = i delta / l, so d/dtau = -i l d/d delta
    let fd = (f(delta + h) - f(delta - h)) / (2.0 * h) * cx(0.0, -1.0);
    let an = theta1_dtau(x, &EllipticDomain::new(1.0, delta).unwrap(), &pol).unwrap();
    assert!((fd - an).norm() < 1e-6 * an.norm().max(1.0));
    let d0 = EllipticDomain::new(1.0, f64::INFINITY).unwrap();
    assert_eq!(theta1_dtau(x, &d0, &pol).unwrap(), cx(0.0, 0.0));
}

#[test]
fn gamma_identities() {
    let pol = Truncation::default();
    let par = RuijsenaarsParams::with_any_t(0.1, 0.1, 0.5).unwrap();
    let z = cx(0.8, 0.0);
    let lhs = elliptic_gamma(z * 0.1, &par, &pol).unwrap();
    let rhs = theta_q(z, 0.1, &pol).unwrap() * elliptic_gamma(z, &par, &pol).unwrap();
    assert!((lhs - rhs).norm() < 1e-13 * rhs.norm());
    let w = cx(0.6, 0.2);
    let refl = elliptic_gamma(cx(0.01, 0.0) / w, &par, &pol).unwrap() * elliptic_gamma(w, &par, &pol).unwrap();
    assert!((refl - cx(1.0, 0.0)).norm() < 1e-13);
    let par0 = RuijsenaarsParams::with_any_t(0.0, 0.3, 0.5).unwrap();
    let mut want = cx(1.0, 0.0);
    for m in 0..200 {
        want /= cx(1.0, 0.0) - w * 0.3f64.powi(m);
    }
    assert!((elliptic_gamma(w, &par0, &pol).unwrap() - want).norm() < 1e-13 * want.norm());
}

#[test]
fn weight_is_ground_state_squared() {
    let pol = Truncation::default();
    let d = dom(0.2);
    let (x1, x2) = (1.3, 0.4);
    for g in [1.0, 1.5, 2.0] {
        let w = weight_w(&[d.z(cx(x1, 0.0)), d.z(cx(x2, 0.0))], g, 0.2, &pol).unwrap();
        let psi = theta1_pow(cx(x1 - x2, 0.0), g, &d, &pol).unwrap();
        assert!((w - psi.norm_sqr()).abs() < 1e-10 * w);
    }
    let par = RuijsenaarsParams::with_any_t(0.1, 0.3, 1.0).unwrap();
    let z = [C64::from_polar(1.0, 0.2), C64::from_polar(1.0, 1.7)];
    assert!((weight_wrel(&z, &par, &pol).unwrap() - cx(1.0, 0.0)).norm() < 1e-14);
}

#[test]
fn sinh_sum_differs_by_constant() {
    let pol = Truncation::default();
    let d = EllipticDomain::new(std::f64::consts::PI, 1.3).unwrap();
    let a = wp1_sinh_sum(cx(0.7, 0.0), &d, &pol).unwrap() - wp1(cx(0.7, 0.0), &d, &pol).unwrap();
    let b = wp1_sinh_sum(cx(2.1, 0.3), &d, &pol).unwrap() - wp1(cx(2.1, 0.3), &d, &pol).unwrap();
    assert!((a - b).norm() < 1e-8);
}

#[test]
fn limit_error_halves() {
    // each increase of delta by (l / 2 pi) ln 2 halves p and the error
    let pol = Truncation::default();
    let x = cx(0.6, 0.0);
    let mut errs = vec![];
    for j in 0..4 {
        let d = EllipticDomain::new(1.0, 1.5 + j as f64 * 2f64.ln() / (2.0 * std::f64::consts::PI)).unwrap();
        errs.push((wp1(x, &d, &pol).unwrap() - wp1_trig(x, 1.0)).norm());
    }
    for w in errs.windows(2) {
        assert!((w[0] / w[1] - 2.0).abs() < 0.05, "{errs:?}");
    }
}

#[test]
fn evaluations_are_deterministic() {
    let pol = Truncation::default();
    let d = dom(0.13);
    let x = cx(0.41, 0.07);
    assert_eq!(wp1(x, &d, &pol).unwrap().re.to_bits(), wp1(x, &d, &pol).unwrap().re.to_bits());
    assert_eq!(theta1(x, &d, &pol).unwrap().im.to_bits(), theta1(x, &d, &pol).unwrap().im.to_bits());
}
