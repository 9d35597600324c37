use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("variable {0} has no value at the evaluation point")]
    UnboundVariable(u32),
    #[error("negative power of a non-monomial substitution")]
    NonMonomialInverse,
    #[error("modulus {0} is not a prime above 2^31")]
    InvalidPrime(u64),
    #[error("invalid algebra specification: {0}")]
    InvalidSpec(String),
    #[error("Gram matrix of the constraints is singular")]
    SingularGram,
    #[error("linear system is singular")]
    SingularSystem,
    #[error("bracket does not scale: {0}")]
    NonScalingBracket(String),
    #[error("exchange relations cannot be solved: {0}")]
    NonInvertibleExchange(String),
    #[error("word degree {0} exceeds the cap {1}")]
    DegreeCapExceeded(usize, usize),
    #[error("rewriting system is not confluent: {0}")]
    NonConfluent(String),
    #[error("no admissible sample point after {0} attempts")]
    Inconclusive(usize),
    #[error("scenario schema error: {0}")]
    Schema(String),
    #[error("unknown check id: {0}")]
    UnknownCheck(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
