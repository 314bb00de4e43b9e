use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    #[error("constellation points {first} and {second} coincide")]
    DegenerateGeometry { first: usize, second: usize },
    #[error("labels are not a bijection onto {0}-bit words")]
    InvalidLabeling(u32),
    #[error("bit count {len} is not a multiple of {bits_per_symbol}")]
    BitCount { len: usize, bits_per_symbol: u32 },
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("need at least {required} symbols, got {actual}")]
    TooFewSymbols { required: usize, actual: usize },
    #[error("constellation point {index} transmitted {count} times, need {required}")]
    UndersampledPoint {
        index: usize,
        count: usize,
        required: usize,
    },
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("noise variance must be positive")]
    ZeroVariance,
    #[error("received block has zero energy")]
    ZeroEnergy,
    #[error("no valid point in the search grid")]
    EmptyGrid,
    #[error("target {0} is not bracketed by the records")]
    NotBracketed(f64),
}
