use num_bigint::BigInt;
use thiserror::Error;

/// A syntax error in one of the text formats (matrix, rational, word,
/// continued fraction). `position` is a byte offset into the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{what}: {message} at position {position}")]
pub struct ParseError {
    pub what: &'static str,
    pub position: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(what: &'static str, position: usize, message: impl Into<String>) -> Self {
        ParseError {
            what,
            position,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix not in GL2(Z): determinant is {0}, not ±1")]
    NotUnimodular(BigInt),
    #[error("lower-right entry is zero; use the d = 0 decomposition")]
    ZeroLowerRight,
    #[error("lower-right entry is {0}, expected 0")]
    NonZeroLowerRight(BigInt),
    #[error("convergent index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("parity sign is only defined for k >= 0, got {0}")]
    NegativeIndex(i64),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("invalid continued fraction: {0}")]
    InvalidContinuedFraction(String),
    #[error("continued fraction evaluates to {found}, expected {expected}")]
    ValueMismatch { found: String, expected: String },
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T> = std::result::Result<T, Error>;
