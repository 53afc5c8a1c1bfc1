use super::gamma::elliptic_gamma;
use super::theta::theta_q;
use crate::domain::{RuijsenaarsParams, Truncation};
use crate::prelude::*;

/// `W(z) = prod_{i != j} theta(z_i/z_j; p)^g` on the unit torus.
///
/// Each pair `theta(w) theta(1/w)` equals `|theta(w)|^2`; the imaginary part
/// is checked (at most `1e-12` relative) and dropped before raising to `g`.
pub fn weight_w(z: &[C64], g: f64, p: f64, pol: &Truncation) -> Result<f64> {
    for zi in z {
        if (zi.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput("weight needs unimodular arguments"));
        }
    }
    let mut acc = 1.0;
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            let w = z[i] / z[j];
            let pair = theta_q(w, p, pol)? * theta_q(w.inv(), p, pol)?;
            if pair.norm() < 1e-300 {
                return Err(Error::Coincident);
            }
            if pair.im.abs() > 1e-12 * pair.norm() || pair.re < 0.0 {
                return Err(Error::InvalidInput("theta pair not real and positive"));
            }
            acc *= pair.re.powf(g);
        }
    }
    Ok(acc)
}

/// `W_rel(z) = prod_{i != j} Gamma(t z_i/z_j; p, q) / Gamma(z_i/z_j; p, q)`.
pub fn weight_wrel(z: &[C64], par: &RuijsenaarsParams, pol: &Truncation) -> Result<C64> {
    let mut acc = c(1.0);
    for i in 0..z.len() {
        for j in 0..z.len() {
            if i == j {
                continue;
            }
            let w = z[i] / z[j];
            if (w - c(1.0)).norm() < 1e-12 {
                return Err(Error::Coincident);
            }
            acc *= elliptic_gamma(w * par.t, par, pol)? / elliptic_gamma(w, par, pol)?;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_particle_free_fermion() {
        let pol = Truncation::default();
        let z = [C64::from_polar(1.0, 0.4), C64::from_polar(1.0, 2.1)];
        let w = weight_w(&z, 1.0, 0.0, &pol).unwrap();
        let u = z[0] / z[1];
        let expect = c(2.0) - u - u.inv();
        assert!((w - expect.re).abs() < 1e-14 && expect.im.abs() < 1e-14);
    }

    #[test]
    fn wrel_trivial_at_t_one() {
        let pol = Truncation::default();
        let par = RuijsenaarsParams::with_any_t(0.1, 0.3, 1.0).unwrap();
        let z = [C64::from_polar(1.0, 0.4), C64::from_polar(1.0, 2.1), C64::from_polar(1.0, -1.0)];
        let w = weight_wrel(&z, &par, &pol).unwrap();
        assert!((w - c(1.0)).norm() < 1e-14);
    }
}
