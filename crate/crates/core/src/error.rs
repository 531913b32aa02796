//! Error type shared across the crate.

use core::fmt;

/// Errors reported by oracles, projections, the LP solver, and the solvers
/// built on top of them.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// A vector had the wrong length for the operation.
    DimensionMismatch { expected: usize, got: usize },
    /// The uncertainty set has zero diameter, so the smoothing parameter
    /// `epsilon / M^2` is undefined. The problem is deterministic; a single
    /// oracle call solves it.
    DegenerateUncertainty,
    /// A value that must be finite was NaN or infinite.
    NonFinite(&'static str),
    /// Instance or configuration data failed validation.
    Invalid(&'static str),
    /// The instance exceeds a hard size limit of an exact oracle.
    TooLarge(&'static str),
    /// An iterative projection hit its iteration cap before reaching the
    /// requested accuracy; the payload is the duality gap it did reach.
    ProjectionAccuracy { achieved_gap: f64 },
    /// The LP solver failed (cycling guard tripped, or the computed solution
    /// did not pass the optimality checks).
    Lp(&'static str),
    /// An internal invariant was violated; indicates a bug.
    Internal(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::DegenerateUncertainty => {
                write!(f, "uncertainty set is a single point; solve with one oracle call")
            }
            Error::NonFinite(what) => write!(f, "non-finite value in {what}"),
            Error::Invalid(msg) => write!(f, "invalid input: {msg}"),
            Error::TooLarge(msg) => write!(f, "instance too large: {msg}"),
            Error::ProjectionAccuracy { achieved_gap } => {
                write!(f, "projection stopped early with duality gap {achieved_gap:e}")
            }
            Error::Lp(msg) => write!(f, "lp solver: {msg}"),
            Error::Internal(msg) => write!(f, "internal invariant violated: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
