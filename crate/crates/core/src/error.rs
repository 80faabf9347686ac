use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid field modulus: {0}")]
    InvalidModulus(String),

    #[error("field order {0} exceeds the supported maximum 2^31")]
    FieldTooLarge(u64),

    #[error("inverse of zero")]
    ZeroInverse,

    #[error("elements belong to different fields")]
    FieldMismatch,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is singular")]
    Singular,

    #[error("enumeration of {needed} items exceeds the budget of {budget}")]
    Budget { needed: u128, budget: u128 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("bound violated: {0}")]
    BoundViolation(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("infeasible request: {0}")]
    Infeasible(String),
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
