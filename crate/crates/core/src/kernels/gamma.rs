use crate::domain::{RuijsenaarsParams, Truncation};
use crate::prelude::*;

/// Elliptic Gamma function
/// `Gamma(z; p, q) = prod_{n,m>=0} (1 - p^(n+1) q^(m+1) / z) / (1 - p^n q^m z)`.
pub fn elliptic_gamma(z: C64, par: &RuijsenaarsParams, pol: &Truncation) -> Result<C64> {
    if z == C64::new(0.0, 0.0) {
        return Err(Error::ZeroArgument);
    }
    let (p, q) = (par.p, par.q);
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidInput("q must lie in (0, 1)"));
    }
    let r = z.norm();
    let sc = r.max(1.0 / r);
    let np = pol.terms(p, sc / (1.0 - q), 0)?;
    let nq = pol.terms(q, sc / (1.0 - p), 0)?;
    let zi = z.inv();
    let one = c(1.0);
    let mut num = one;
    let mut den = one;
    let mut pn = 1.0;
    for _ in 0..=np {
        let mut qm = 1.0;
        for _ in 0..=nq {
            let d = one - z * (pn * qm);
            if d.norm() < 1e-14 {
                return Err(Error::Pole);
            }
            den *= d;
            num *= one - zi * (pn * p * qm * q);
            qm *= q;
        }
        pn *= p;
    }
    Ok(num / den)
}
