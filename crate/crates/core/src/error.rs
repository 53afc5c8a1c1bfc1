use core::fmt;

/// Everything that can go wrong. `code()` gives a stable machine-readable tag.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the declared domain of an operation.
    InvalidInput(&'static str),
    /// `theta_q` at `z = 0`.
    ZeroArgument,
    /// The truncation ceiling is too small for the requested tail tolerance.
    TailBound { p: f64, max_terms: usize },
    /// Evaluation on (or numerically at) a pole or lattice point.
    Pole,
    /// Fractional power requested outside the positivity domain.
    BranchAmbiguity,
    /// Two coordinates coincide modulo the lattice.
    Coincident,
    /// Finite differences at `h` and `h/2` disagree.
    FdInconsistent { change: f64 },
    /// A tau-derivative was required but the field has none.
    MissingDtau,
    /// Newton or continuation failed.
    NonConvergence { residual: f64 },
    /// Roots collided or hit the lattice during continuation.
    RootCollision,
    /// `n(n + s1 - s2) - k kappa` vanished at a visited index.
    Resonance { n: i64, k: usize },
    /// Contour radii outside the admissible window.
    RadiusWindow,
    /// Node doubling moved the result by more than the tolerance.
    Quadrature { delta: f64 },
    /// Argument of theta wound around zero along a contour.
    Winding,
    /// The integrand does not close up at the seam of the contour.
    SeamMismatch { jump: f64 },
    /// Richardson extrapolation did not settle.
    Extrapolation,
    /// Table and request disagree (order, parameters).
    Mismatch(&'static str),
    /// Matrix was singular to working precision.
    Singular,
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid_input",
            Error::ZeroArgument => "zero_argument",
            Error::TailBound { .. } => "tail_bound",
            Error::Pole => "pole",
            Error::BranchAmbiguity => "branch_ambiguity",
            Error::Coincident => "coincident",
            Error::FdInconsistent { .. } => "fd_inconsistent",
            Error::MissingDtau => "missing_dtau",
            Error::NonConvergence { .. } => "non_convergence",
            Error::RootCollision => "root_collision",
            Error::Resonance { .. } => "resonance",
            Error::RadiusWindow => "radius_window",
            Error::Quadrature { .. } => "quadrature",
            Error::Winding => "winding",
            Error::SeamMismatch { .. } => "seam_mismatch",
            Error::Extrapolation => "extrapolation",
            Error::Mismatch(_) => "mismatch",
            Error::Singular => "singular",
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(m) => write!(f, "invalid input: {m}"),
            Error::ZeroArgument => write!(f, "theta argument is zero"),
            Error::TailBound { p, max_terms } => {
                write!(f, "tail bound not met with {max_terms} terms at p = {p}")
            }
            Error::Pole => write!(f, "argument on the period lattice"),
            Error::BranchAmbiguity => {
                write!(f, "fractional power outside the real positivity interval (0, 2l)")
            }
            Error::Coincident => write!(f, "coincident coordinates"),
            Error::FdInconsistent { change } => {
                write!(f, "finite differences inconsistent (change {change:e})")
            }
            Error::MissingDtau => write!(f, "field has no analytic tau-derivative"),
            Error::NonConvergence { residual } => {
                write!(f, "iteration did not converge (residual {residual:e})")
            }
            Error::RootCollision => write!(f, "roots collided or reached the lattice"),
            Error::Resonance { n, k } => write!(f, "resonant divisor at (n, k) = ({n}, {k})"),
            Error::RadiusWindow => write!(f, "contour radius outside the admissible window"),
            Error::Quadrature { delta } => write!(f, "quadrature not converged (delta {delta:e})"),
            Error::Winding => write!(f, "theta winds around zero on the contour"),
            Error::SeamMismatch { jump } => write!(f, "integrand not periodic on contour (jump {jump:e})"),
            Error::Extrapolation => write!(f, "extrapolation did not converge"),
            Error::Mismatch(m) => write!(f, "mismatch: {m}"),
            Error::Singular => write!(f, "singular matrix"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
