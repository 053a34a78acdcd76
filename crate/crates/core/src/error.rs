//! Crate-wide error type and result alias.

use thiserror::Error;

/// Errors reported by parsers, guards, generators, and solvers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input text did not match the expected file format.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    /// An instance violated a structural requirement.
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    /// Requested work exceeds a hard size guard.
    #[error("size guard exceeded: {0}")]
    GuardExceeded(String),
    /// Parameters violate a hypothesis required for correctness.
    #[error("hypothesis violation: {0}")]
    HypothesisViolation(String),
    /// Generator parameters cannot be satisfied by any instance.
    #[error("infeasible generator parameters: {0}")]
    InfeasibleParams(String),
    /// A subset transform overflowed its 64-bit counters.
    #[error("counter overflow in subset transform")]
    CountOverflow,
    /// A layered table was paired with a closure it does not belong to.
    #[error("table/closure mismatch: {0}")]
    TableMismatch(String),
}

impl Error {
    /// Shorthand for a parse error at a given 1-based line.
    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
