use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("base must be at least 2, got {0}")]
    InvalidBase(u64),
    #[error("digit {digit} out of range for base {base}")]
    DigitOutOfRange { digit: u64, base: u32 },
    #[error("words of different bases cannot be combined ({0} vs {1})")]
    MixedBases(u32, u32),
    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime set must be non-empty")]
    EmptyPrimeSet,
    #[error("exponent vector has {got} entries, prime set has {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("zero is not allowed here: {0}")]
    Zero(&'static str),
    #[error("invalid ratio {0}/{1}: need 0 < p/q <= 1")]
    InvalidRatio(u64, u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("numeric overflow: {0}")]
    Overflow(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("child search stalled on word {word} after {cap} extra digits")]
    Stalled { word: String, cap: usize },
}

/// Coarse classification, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Domain,
    Resource,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::ResourceLimit(_) | Error::Stalled { .. } | Error::Overflow(_) => ErrorKind::Resource,
            _ => ErrorKind::Domain,
        }
    }

    /// Stable machine-readable tag.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::InvalidBase(_) => "invalid_base",
            Error::DigitOutOfRange { .. } => "digit_out_of_range",
            Error::MixedBases(..) => "mixed_bases",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::NotPrime(_) => "not_prime",
            Error::EmptyPrimeSet => "empty_prime_set",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::Zero(_) => "zero",
            Error::InvalidRatio(..) => "invalid_ratio",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Overflow(_) => "overflow",
            Error::ResourceLimit(_) => "resource_limit",
            Error::Stalled { .. } => "stalled",
        }
    }
}
