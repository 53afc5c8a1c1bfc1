mod common;

use common::{cx, PoschlTeller};
use ellipcmr::bethe::Hermite;
use ellipcmr::field::*;
use ellipcmr::kernels::{heat_constant_c0, wp1_shifted, HalfShift};
use ellipcmr::operators::*;
use ellipcmr::{EllipticDomain, Result, RuijsenaarsParams, Truncation, C64};
use std::f64::consts::PI;

fn env(p: f64) -> Env {
    Env::new(EllipticDomain::from_nome(1.0, p).unwrap())
}

/// `phi(x1 - x2)` for a one-variable field `phi`.
struct OfDifference<'a>(&'a dyn SmoothField);

impl SmoothField for OfDifference<'_> {
    fn dim(&self) -> usize {
        2
    }
    fn value(&self, x: &[C64]) -> Result<C64> {
        self.0.value(&[x[0] - x[1]])
    }
    fn analytic_jet(&self, x: &[C64]) -> Option<Result<Jet>> {
        Some(jet(self.0, &[x[0] - x[1]], &FdConfig::default()).map(|j| Jet {
            value: j.value,
            d1: vec![j.d1[0], -j.d1[0]],
            d2: vec![j.d2[0], j.d2[0]],
        }))
    }
}

fn hermite1(p: f64) -> (Hermite, C64) {
    let e = env(p);
    let t = cx(0.31, 0.07 * e.dom.delta());
    let st = ellipcmr::bethe::certify(&[t], &e.dom, &e.pol).unwrap();
    (Hermite { roots: st.roots.clone(), xi: st.xi, dom: e.dom, pol: e.pol }, st.energy)
}

#[test]
fn hermite_is_two_particle_eigenfunction() {
    let e = env(0.05);
    let (h, en) = hermite1(0.05);
    let psi = OfDifference(&h);
    // g = -1: g(g-1) = 2 = n(n+1)
    for x in [[cx(0.9, 0.1), cx(0.2, 0.0)], [cx(1.4, -0.1), cx(0.3, 0.05)]] {
        let r = apply_ecs(&psi, &x, &CouplingSet::ecs(-1.0), &e).unwrap() - en * psi.value(&x).unwrap();
        assert!(r.norm() / psi.value(&x).unwrap().norm() <= 1e-8);
    }
}

#[test]
fn trigonometric_ground_state() {
    let e = Env::new(EllipticDomain::new(1.0, f64::INFINITY).unwrap());
    let g = 2.0;
    let psi = GroundState { n: 2, g, dom: e.dom, pol: e.pol };
    let x = [cx(1.1, 0.0), cx(0.3, 0.0)];
    let want = PI * PI * g * g / 4.0;
    let r = apply_ecs(&psi, &x, &CouplingSet::ecs(g), &e).unwrap() - psi.value(&x).unwrap() * want;
    assert!(r.norm() <= 1e-10 * psi.value(&x).unwrap().norm());
}

#[test]
fn theta_power_nonstationary() {
    let e = env(0.1);
    for g in [1.5, 2.0, 3.0] {
        let psi = GroundState { n: 2, g, dom: e.dom, pol: e.pol };
        let en = heat_constant_c0(&e.dom, &e.pol).unwrap() * g * g;
        for x in [[cx(1.2, 0.0), cx(0.45, 0.0)], [cx(0.9, 0.0), cx(0.1, 0.0)]] {
            let r = nonstationary_residual(&psi, cx(2.0 * g, 0.0), cx(en, 0.0), &x, &CouplingSet::ecs(g), &e).unwrap();
            assert!(r.norm() <= 1e-8 * psi.value(&x).unwrap().norm());
        }
    }
}

#[test]
fn gauge_symmetry_with_factor_two() {
    let e = env(0.1);
    let g = 2.0;
    let kappa = cx(2.0 * g, 0.0);
    let en = cx(heat_constant_c0(&e.dom, &e.pol).unwrap() * g * g, 0.0);
    let psi = GroundState { n: 2, g, dom: e.dom, pol: e.pol };
    let tau = e.dom.tau();
    let (cv, dc) = (cx(1.0, 0.0) + tau * tau, tau * 2.0);
    let gauged = Gauged { inner: &psi, c: cv, dc, fd: FdConfig::default() };
    let x = [cx(1.2, 0.0), cx(0.45, 0.0)];
    let cs = CouplingSet::ecs(g);
    let e2 = gauge_shift_energy(en, kappa, cv, dc, &e.dom);
    let v = gauged.value(&x).unwrap();
    assert!(nonstationary_residual(&gauged, kappa, e2, &x, &cs, &e).unwrap().norm() <= 1e-8 * v.norm());
    // with i pi kappa / l^2 instead, exactly (i pi kappa / 2 l^2)(C'/C) psi is left over
    let literal = en + cx(0.0, PI) * kappa * dc / cv;
    let r = nonstationary_residual(&gauged, kappa, literal, &x, &cs, &e).unwrap();
    let expect = -cx(0.0, PI / 2.0) * kappa * dc / cv * v;
    assert!((r - expect).norm() <= 1e-8 * v.norm());
    assert!(r.norm() > 1e-3 * v.norm());
}

#[test]
fn lame_cases() {
    let e = env(0.05);
    let pw = PlaneWave { k: vec![cx(1.3, 0.0)] };
    assert!(lame_residual(&pw, cx(1.69, 0.0), cx(0.4, 0.1), 0.0, false, &e).unwrap().norm() < 1e-13);
    let (h, en) = hermite1(0.05);
    for x in [cx(0.7, 0.05), cx(1.5, -0.1)] {
        let r = lame_residual(&h, en, x, -1.0, false, &e).unwrap();
        assert!(r.norm() <= 1e-8 * h.value(&[x]).unwrap().norm());
    }
    for x in [0.1, 0.77, 1.9] {
        let v = wp1_shifted(cx(x, 0.0), HalfShift::IDelta, &e.dom, &e.pol).unwrap();
        assert!(v.im.abs() <= 1e-12);
    }
}

#[test]
fn heun_equal_couplings_scale_to_lame() {
    let e = env(0.1);
    let g = 1.7;
    let cs = CouplingSet { g, gnu: [g; 4] };
    let phi = PlaneWave { k: vec![cx(0.8, 0.1)] };
    let psi = PlaneWave { k: vec![cx(1.6, 0.2)] };
    let en = cx(0.37, 0.0);
    for x in [cx(0.21, 0.03), cx(0.35, -0.05)] {
        let a = heun_residual(&psi, en * 4.0, x, &cs, &e).unwrap();
        let b = lame_residual(&phi, en, x * 2.0, g, false, &e).unwrap() * 4.0;
        assert!((a - b).norm() <= 1e-9 * b.norm().max(1.0), "{a} {b}");
    }
}

#[test]
fn heun_trigonometric_limit_is_poschl_teller() {
    let e = Env::new(EllipticDomain::new(PI, f64::INFINITY).unwrap());
    for (g0, g1) in [(2.0, 3.0), (1.5, 2.5)] {
        let pt = PoschlTeller { a: g0, b: g1 };
        let psi = Dilated { inner: &pt, a: 0.5, fd: FdConfig::default() };
        let cs = CouplingSet { g: g0, gnu: [g0, g1, 0.7, 1.3] };
        let en = cx((g0 + g1) * (g0 + g1) / 4.0, 0.0);
        for x in [0.7, 1.3, 2.2] {
            let x = cx(x, 0.0);
            let r = heun_residual(&psi, en, x, &cs, &e).unwrap();
            assert!(r.norm() <= 1e-10 * psi.value(&[x]).unwrap().norm());
        }
    }
}

fn test_field() -> PlaneWave {
    PlaneWave { k: vec![cx(0.7, 0.1), cx(-1.2, 0.0), cx(0.4, -0.2), cx(0.9, 0.3)] }
}

#[test]
fn deformed_reductions_and_duality() {
    let e = env(0.1);
    let g = 1.8;
    let pw2 = PlaneWave { k: vec![cx(0.7, 0.1), cx(-1.2, 0.0)] };
    let x = [cx(0.3, 0.1), cx(1.1, -0.05)];
    let a = apply_deformed_ecs(2, 0, &pw2, &x, g, &e).unwrap();
    let b = apply_ecs(&pw2, &x, &CouplingSet::ecs(g), &e).unwrap();
    assert!((a - b).norm() <= 1e-12 * b.norm());
    let a = apply_deformed_ecs(0, 2, &pw2, &x, g, &e).unwrap();
    let b = apply_ecs(&pw2, &x, &CouplingSet::ecs(1.0 / g), &e).unwrap() * (-g);
    assert!((a - b).norm() <= 1e-12 * b.norm());
    let pw = test_field();
    let coords = [cx(0.3, 0.1), cx(1.1, -0.05), cx(0.6, 0.2), cx(1.7, 0.0)];
    for (n, m) in [(1, 1), (2, 1), (1, 3)] {
        let c = &coords[..n + m];
        let f = PlaneWave { k: pw.k[..n + m].to_vec() };
        let sigma: Vec<usize> = (0..n + m).map(|i| (i + m) % (n + m)).collect();
        // psi'(xt, x) = psi(x, xt)
        let swapped = Permuted { inner: &f, sigma, fd: FdConfig::default() };
        let mut c2 = c[n..].to_vec();
        c2.extend_from_slice(&c[..n]);
        let lhs = apply_deformed_ecs(n, m, &f, c, g, &e).unwrap();
        let rhs = apply_deformed_ecs(m, n, &swapped, &c2, 1.0 / g, &e).unwrap() * g;
        assert!((lhs + rhs).norm() <= 1e-10 * lhs.norm().max(1.0), "{n} {m}");
    }
}

#[test]
fn generalized_reductions_and_calogero_trick() {
    let e = env(0.1);
    let g = 2.3;
    let pw = test_field();
    let coords = [cx(0.3, 0.1), cx(1.1, -0.05), cx(0.6, 0.2), cx(1.7, 0.0)];
    let a = apply_generalized_ecs([4, 0, 0, 0], &pw, &coords, g, &e).unwrap();
    let b = apply_ecs(&pw, &coords, &CouplingSet::ecs(g), &e).unwrap();
    assert!((a - b).norm() <= 1e-12 * b.norm());
    let id = e.dom.delta();
    for (n1, n2) in [(2, 2), (1, 3), (3, 1)] {
        let a = apply_generalized_ecs([n1, 0, n2, 0], &pw, &coords, g, &e).unwrap();
        let mut shift = vec![cx(0.0, 0.0); 4];
        let mut moved = coords.to_vec();
        for j in n1..4 {
            shift[j] = cx(0.0, id);
            moved[j] -= cx(0.0, id);
        }
        let tr = Translated { inner: &pw, shift, fd: FdConfig::default() };
        let b = apply_ecs(&tr, &moved, &CouplingSet::ecs(g), &e).unwrap();
        assert!((a - b).norm() <= 1e-10 * b.norm(), "{n1} {n2}: {a} {b}");
    }
    assert_eq!(shifted_pair_potential(&coords, &[], g, &e).unwrap(), cx(0.0, 0.0));
}

#[test]
fn ruijsenaars_trigonometric_eigenvalues() {
    let pol = Truncation::default();
    let (q, t) = (0.3, 0.6);
    let par = RuijsenaarsParams::new(0.0, q, t).unwrap();
    let one = |_: &[C64]| -> Result<C64> { Ok(cx(1.0, 0.0)) };
    let e1 = |z: &[C64]| -> Result<C64> { Ok(z[0] + z[1]) };
    for z in [[C64::from_polar(1.0, 0.3), C64::from_polar(1.0, 1.9)], [C64::from_polar(1.0, -2.0), C64::from_polar(1.0, 0.8)]] {
        let d0 = apply_ruijsenaars_d(&one, &z, &par, 1, &pol).unwrap();
        assert!((d0 - cx(1.0 + t, 0.0)).norm() < 1e-13);
        let d1 = apply_ruijsenaars_d(&e1, &z, &par, 1, &pol).unwrap() / (z[0] + z[1]);
        assert!((d1 - cx(1.0 + q * t, 0.0)).norm() < 1e-13);
        let dm = apply_ruijsenaars_d(&one, &z, &par, -1, &pol).unwrap();
        assert!((dm - cx(1.0 + 1.0 / t, 0.0)).norm() < 1e-13);
    }
}

#[test]
fn kernel_identities() {
    let e = env(0.1);
    let g = 1.4;
    let s22 = KernelSpec::new(2, 2, g).unwrap();
    let r = kernel_identity_residual(&s22, &[cx(0.3, 0.1), cx(1.2, 0.0)], &[cx(0.7, -0.2), cx(1.6, 0.15)], &e).unwrap();
    assert!(r.norm() <= 1e-8);
    let s21 = KernelSpec::new(2, 1, g).unwrap();
    let r0 = kernel_identity_residual(&s21, &[cx(0.3, 0.1), cx(1.2, 0.0)], &[cx(0.7, -0.2)], &e).unwrap();
    let r1 = kernel_identity_residual(&s21, &[cx(1.3, -0.1), cx(0.2, 0.3)], &[cx(0.5, 0.1)], &e).unwrap();
    assert!((r0 - r1).norm() <= 1e-8 * r0.norm().max(1.0));
    // (2, 0): psi0 solves the kappa = 2g equation with E = R
    let s20 = KernelSpec::new(2, 0, g).unwrap();
    let en = kernel_identity_residual(&s20, &[cx(0.9, 0.0), cx(0.2, 0.0)], &[], &e).unwrap();
    let psi = GroundState { n: 2, g, dom: e.dom, pol: e.pol };
    let x = [cx(1.5, 0.0), cx(0.4, 0.0)];
    let r = nonstationary_residual(&psi, cx(2.0 * g, 0.0), en, &x, &CouplingSet::ecs(g), &e).unwrap();
    assert!(r.norm() <= 1e-8 * psi.value(&x).unwrap().norm());
}
