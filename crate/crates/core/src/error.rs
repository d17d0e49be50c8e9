use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("field order {p}^{m} exceeds 65536")]
    OrderOverflow { p: u32, m: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("zero polynomial has no degree")]
    ZeroPolynomial,
    #[error("enumeration of {count} codewords exceeds the guard of {guard}")]
    EnumerationGuard { count: u128, guard: u128 },
    #[error("invalid channel distribution: {0}")]
    InvalidDistribution(String),
    #[error("channel has zero capacity (p_max = p_min)")]
    ZeroCapacity,
    #[error("all multiplicities are zero")]
    DegenerateMultiplicity,
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("parameter outside the valid domain: {0}")]
    Domain(String),
    #[error("unknown bound `{0}`")]
    UnknownBound(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Config(e.to_string())
    }
}
