use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Failures reported by the numerical core.
///
/// `InvalidParameter` and `InvalidInput` are validation errors (bad
/// arguments). The remaining variants are numerical failures.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A scalar parameter is outside its admissible range.
    InvalidParameter { name: &'static str, reason: String },
    /// A density or grid violates a precondition.
    InvalidInput(String),
    /// Multiplier bisection could not bracket unit mass.
    BracketFailure { lo: f64, hi: f64, widenings: usize },
    /// Iteration cap hit before the stopping criterion was met.
    NotConverged {
        iterations: usize,
        last_change: f64,
        el_residual: f64,
    },
    /// The support kept reaching the domain boundary after all regrowths.
    DomainExhausted { r_max: f64, support_radius: f64 },
    /// A time step above the stability bound was requested.
    UnstableTimeStep { dt: f64, bound: f64 },
    /// NaN or negative density detected during time stepping.
    Breakdown { step: usize, reason: String },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for argument-validation failures, false for numerical ones.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::InvalidParameter { .. } | Error::InvalidInput(_))
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter { name, reason } => write!(f, "{name} {reason}"),
            Error::InvalidInput(msg) => f.write_str(msg),
            Error::BracketFailure { lo, hi, widenings } => write!(
                f,
                "multiplier bisection failed to bracket unit mass in [{lo:e}, {hi:e}] after {widenings} widenings"
            ),
            Error::NotConverged { iterations, last_change, el_residual } => write!(
                f,
                "no convergence after {iterations} iterations (last L1 change {last_change:e}, EL residual {el_residual:e})"
            ),
            Error::DomainExhausted { r_max, support_radius } => write!(
                f,
                "support radius {support_radius} still reaches the domain boundary at r_max = {r_max}"
            ),
            Error::UnstableTimeStep { dt, bound } => {
                write!(f, "time step {dt:e} exceeds the stability bound {bound:e}")
            }
            Error::Breakdown { step, reason } => write!(f, "breakdown at step {step}: {reason}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
