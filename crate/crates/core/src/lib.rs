//! Special functions for elliptic Calogero-Moser-Sutherland models.
//!
//! Theta functions, the Weierstrass-type potential `wp1`, elliptic Gamma,
//! the differential and difference operators built on them, Bethe roots of
//! the Lame equation, p-series eigenfunctions for two particles, and the
//! contour-integral transforms that turn kernel functions into
//! eigenfunctions. Every construction comes with a residual against the
//! equation it is supposed to solve.
//!
//! The crate is `no_std` with `alloc` when the default `std` feature is off.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

mod prelude;

pub mod bethe;
pub mod domain;
pub mod error;
pub mod field;
pub mod kernels;
pub mod linalg;
pub mod operators;
pub mod pseries;
pub mod transform;

pub use domain::{EllipticDomain, RuijsenaarsParams, Truncation};
pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
