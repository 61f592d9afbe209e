use std::fmt;

/// Errors produced by constructors, evaluators and solvers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An input failed validation (grid too small, parameter out of range, ...).
    InvalidInput(String),
    /// An iterative solver or geometric check did not reach its target.
    NonConvergence(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::NonConvergence(msg) => write!(f, "did not converge: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
