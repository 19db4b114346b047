use thiserror::Error;

/// Errors raised by the exact and Monte Carlo routines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Caller passed something outside an operation's domain.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// The requested size exceeds an enumeration cap.
    #[error("resource limit: {what} requires n <= {cap}, got n = {n}")]
    Resource { what: &'static str, n: u32, cap: u32 },

    /// A proven identity failed to hold on computed data.
    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    /// Exact arithmetic produced a value that must be integral but is not.
    #[error("internal consistency: {0}")]
    InternalConsistency(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
