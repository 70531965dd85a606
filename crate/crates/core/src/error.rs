use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// An input is well formed but violates an operation precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// The requested computation exceeds a configured budget.
    #[error("capability exceeded: {0}")]
    Capability(String),
    /// A structural requirement on the family does not hold.
    #[error("structure error: {0}")]
    Structure(String),
    /// Malformed serialized input.
    #[error("parse error: {0}")]
    Parse(String),
    /// An internal invariant failed. Indicates a bug.
    #[error("internal invariant failure: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

macro_rules! domain {
    ($($arg:tt)*) => { $crate::error::Error::Domain(format!($($arg)*)) };
}
pub(crate) use domain;
