//! Theta functions, `wp1`, `zeta1`, elliptic Gamma and weights.
//!
//! All series are cut off by [`Truncation`](crate::Truncation) and all
//! derivatives are term-wise analytic.

mod gamma;
mod theta;
mod weights;
mod wp;

pub use gamma::elliptic_gamma;
pub use theta::{
    dlog_theta_q, lattice_distance, log_theta_q, theta1, theta1_dlog_tau, theta1_dtau, theta1_ln,
    theta1_neg_d2log, theta1_pow, theta_q, zeta1, zeta1_fourier, ThetaLogJet,
};
pub use weights::{weight_w, weight_wrel};
pub use wp::{
    eta1_over_omega1, heat_constant_c0, heat_residual, wp1, wp1_fourier_coeffs, wp1_shifted, wp1_sinh_sum,
    wp1_trig, FourierCoeff, HalfShift,
};
