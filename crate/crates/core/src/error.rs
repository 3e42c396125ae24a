use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid group parameters: {0}")]
    InvalidParams(String),
    #[error("index {index} outside the allowed range {range}")]
    IndexOutOfRange { index: u32, range: String },
    #[error("group parameters do not match")]
    MismatchedParams,
    #[error("presentation does not define a finite group")]
    InfinitePresentation,
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("invalid extension datum: {0}")]
    InvalidDatum(String),
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("insufficient sample: {found} primes scanned, {required} required")]
    InsufficientSample { found: usize, required: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
