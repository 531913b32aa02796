//! Error type carrying the process exit code contract: 2 for usage errors,
//! 3 for instance problems, 4 for solver internals.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Instance,
    Solver,
}

#[derive(Debug)]
pub struct HarnessError {
    pub kind: ErrorKind,
    pub message: String,
}

impl HarnessError {
    pub fn usage(message: impl Into<String>) -> Self {
        HarnessError { kind: ErrorKind::Usage, message: message.into() }
    }

    pub fn instance(message: impl Into<String>) -> Self {
        HarnessError { kind: ErrorKind::Instance, message: message.into() }
    }

    pub fn solver(message: impl Into<String>) -> Self {
        HarnessError { kind: ErrorKind::Solver, message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Usage => 2,
            ErrorKind::Instance => 3,
            ErrorKind::Solver => 4,
        }
    }
}

impl fmt::Display for HarnessError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for HarnessError {}

impl From<std::io::Error> for HarnessError {
    fn from(e: std::io::Error) -> Self {
        HarnessError::instance(format!("io error: {e}"))
    }
}

/// Solver library errors split into the instance/solver exit classes:
/// validation problems are the caller's data, numerical failures are ours.
impl From<robustfw_core::Error> for HarnessError {
    fn from(e: robustfw_core::Error) -> Self {
        use robustfw_core::Error as CoreError;
        match e {
            CoreError::DimensionMismatch { .. }
            | CoreError::DegenerateUncertainty
            | CoreError::NonFinite(_)
            | CoreError::Invalid(_)
            | CoreError::TooLarge(_) => HarnessError::instance(format!("{e}")),
            CoreError::ProjectionAccuracy { .. }
            | CoreError::Lp(_)
            | CoreError::Internal(_) => HarnessError::solver(format!("{e}")),
        }
    }
}
