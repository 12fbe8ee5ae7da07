use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{message} at line {line}, column {column}")]
    Parse {
        message: String,
        line: usize,
        column: usize,
    },

    #[error("factor index {index} out of range for rank {rank}")]
    FactorOutOfRange { index: usize, rank: usize },

    #[error("negative exponent {0} in expression")]
    NegativeExponent(i64),

    #[error("the zero element has no degree")]
    ZeroElement,

    #[error("{value} is not {prime}-integral")]
    NotIntegral { value: String, prime: u64 },

    #[error("prime {0} is not an odd prime")]
    InvalidPrime(u64),

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("central characters differ")]
    CharacterMismatch,

    #[error("incompatible operands: {0}")]
    Incompatible(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
