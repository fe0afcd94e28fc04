use thiserror::Error;

/// Errors raised by the exact algorithms.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("conductor {requested} exceeds the configured ceiling {ceiling}")]
    ConductorOverflow { requested: u32, ceiling: u32 },
    #[error("value is not real")]
    NotReal,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not alternating")]
    NotAlternating,
    #[error("form is degenerate")]
    Degenerate,
    #[error("not a complex: d∘d is nonzero at degree {0}")]
    NotAComplex(i64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
