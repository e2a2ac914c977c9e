use std::io;

use thiserror::Error;

/// Errors produced by the simulation library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("step budget exceeded after {steps} steps (budget {budget}, {in_tree} of {n} vertices attached)")]
    BudgetExceeded {
        steps: u64,
        budget: u64,
        in_tree: usize,
        n: usize,
    },

    #[error("size cap exceeded: {what} is {got}, cap is {cap}")]
    SizeCap {
        what: &'static str,
        got: usize,
        cap: usize,
    },

    #[error("numeric range error: {0}")]
    NumericRange(String),

    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExceeded { .. } | Error::SizeCap { .. } | Error::NumericRange(_) => 3,
            Error::InternalInvariant(_) => 1,
            _ => 2,
        }
    }
}
