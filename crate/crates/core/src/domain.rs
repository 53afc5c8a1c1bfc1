//! Half-periods, nome and truncation policy.

use crate::prelude::*;

/// Half-periods `(l, i delta)` of the lattice.
///
/// `p = exp(-2 pi delta / l)` is the nome and `tau = i delta / l`. The
/// trigonometric degeneration `p = 0` is represented by `delta = inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticDomain {
    ell: f64,
    delta: f64,
    p: f64,
}

impl EllipticDomain {
    pub fn new(ell: f64, delta: f64) -> Result<Self> {
        if !(ell > 0.0 && ell.is_finite()) {
            return Err(Error::InvalidInput("l must be positive and finite"));
        }
        if !(delta > 0.0) {
            return Err(Error::InvalidInput("delta must be positive"));
        }
        let p = if delta.is_infinite() { 0.0 } else { (-2.0 * PI * delta / ell).exp() };
        if !(p < 1.0) {
            return Err(Error::InvalidInput("nome must be below 1"));
        }
        Ok(EllipticDomain { ell, delta, p })
    }

    /// Domain from `l` and the nome; `p = 0` gives the trigonometric case.
    pub fn from_nome(ell: f64, p: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&p) {
            return Err(Error::InvalidInput("nome must lie in [0, 1)"));
        }
        if !(ell > 0.0 && ell.is_finite()) {
            return Err(Error::InvalidInput("l must be positive and finite"));
        }
        let delta = if p == 0.0 { f64::INFINITY } else { -ell * p.ln() / (2.0 * PI) };
        if p > 0.0 {
            let back = (-2.0 * PI * delta / ell).exp();
            if (back - p).abs() > 8.0 * f64::EPSILON * p {
                return Err(Error::InvalidInput("nome does not round-trip through delta"));
            }
        }
        Ok(EllipticDomain { ell, delta, p })
    }

    pub fn ell(&self) -> f64 {
        self.ell
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// `tau = i delta / l`; infinite imaginary part at `p = 0`.
    pub fn tau(&self) -> C64 {
        C64::new(0.0, self.delta / self.ell)
    }

    pub fn is_trigonometric(&self) -> bool {
        self.p == 0.0
    }

    /// `z = exp(i pi x / l)`.
    pub fn z(&self, x: C64) -> C64 {
        (I * PI * x / self.ell).exp()
    }

    /// Same `l`, different nome.
    pub fn with_nome(&self, p: f64) -> Result<Self> {
        EllipticDomain::from_nome(self.ell, p)
    }
}

/// How infinite products and series are cut off.
///
/// The number of kept factors `N` is the smallest one with
/// `p^(N+1) (N+1)^a C / (1 - p) <= tail_tol`, where `C` bounds the
/// argument and `a` is the polynomial weight of the series (0 for
/// products, 1 or 2 for derivative series).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    pub max_terms: usize,
    pub tail_tol: f64,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation { max_terms: 512, tail_tol: 1e-14 }
    }
}

impl Truncation {
    pub fn terms(&self, p: f64, scale: f64, weight: i32) -> Result<usize> {
        if p == 0.0 {
            return Ok(0);
        }
        if !(0.0..1.0).contains(&p) {
            return Err(Error::InvalidInput("nome must lie in [0, 1)"));
        }
        let scale = scale.max(1.0);
        let mut pn = p;
        for n in 0..=self.max_terms {
            let w = ((n + 1) as f64).powi(weight);
            if pn * w * scale / (1.0 - p) <= self.tail_tol {
                return Ok(n);
            }
            pn *= p;
        }
        Err(Error::TailBound { p, max_terms: self.max_terms })
    }
}

/// Parameters of the relativistic model: nome `p`, shift `q`, coupling `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RuijsenaarsParams {
    pub p: f64,
    pub q: f64,
    pub t: f64,
}

impl RuijsenaarsParams {
    /// `p` may be 0 (trigonometric); `q` and `t` must lie in (0, 1).
    pub fn new(p: f64, q: f64, t: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&p) {
            return Err(Error::InvalidInput("p must lie in [0, 1)"));
        }
        if !(q > 0.0 && q < 1.0) || !(t > 0.0 && t < 1.0) {
            return Err(Error::InvalidInput("q and t must lie in (0, 1)"));
        }
        Ok(RuijsenaarsParams { p, q, t })
    }

    /// Same as `new` but lets `t` be any positive real (`t = 1` is the free case,
    /// `t > 1` arises for the inverse operator).
    pub fn with_any_t(p: f64, q: f64, t: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&p) || !(q > 0.0) || !(t > 0.0) {
            return Err(Error::InvalidInput("need 0 <= p < 1 and positive q, t"));
        }
        Ok(RuijsenaarsParams { p, q, t })
    }
}
