// f64 math goes through num_traits::Float so the same code builds without std.
#[allow(unused_imports)]
pub(crate) use num_traits::Float;

pub(crate) use alloc::vec;
pub(crate) use alloc::vec::Vec;
pub(crate) use num_complex::Complex64 as C64;

pub(crate) use crate::error::{Error, Result};

pub(crate) const PI: f64 = core::f64::consts::PI;
pub(crate) const I: C64 = C64 { re: 0.0, im: 1.0 };

#[inline]
pub(crate) fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}
