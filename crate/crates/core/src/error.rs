use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("extension degree {0} is outside 1..=24")]
    DegreeOutOfRange(u32),
    #[error("field of order {p}^{k} is too large for this operation")]
    FieldTooLarge { p: u32, k: u32 },
    #[error("{what} needs {needed} units but the budget allows {limit}")]
    Budget {
        what: &'static str,
        needed: u128,
        limit: u64,
    },
    #[error("coefficient {0} is zero")]
    ZeroCoefficient(usize),
    #[error("L-polynomial coefficient A_{0} is not integral (degenerate input or wrong degree model)")]
    NonIntegral(usize),
    #[error("Artin-Hasse coefficient lambda_{0} is not p-integral")]
    NotPIntegral(usize),
    #[error("generic polytope path supports dimension <= 4, got {0}")]
    Dimension(usize),
    #[error("point set does not span a full-dimensional polytope")]
    DegenerateHull,
    #[error("missing profile entry at index {0}")]
    MissingIndex(usize),
    #[error("negative Hodge number H({0}) = {1}")]
    NegativeHodge(usize, i64),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("table cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
