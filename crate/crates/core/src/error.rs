use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("mixed primes: {0} and {1}")]
    MixedPrimes(u64, u64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("resolution limit exceeded: {0}")]
    ResolutionLimit(String),
    #[error("precondition failed: {reason} (witness {witness})")]
    Precondition { reason: String, witness: String },
    #[error("inconsistent results: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
