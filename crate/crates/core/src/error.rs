use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("field order {q} is not supported (prime powers up to {max})")]
    UnsupportedOrder { q: u64, max: u64 },

    #[error("invalid modulus: {0}")]
    InvalidModulus(String),

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("operands belong to different fields")]
    FieldMismatch,

    #[error("element index {index} out of range for a field of order {q}")]
    ElementOutOfRange { index: u64, q: u64 },

    #[error("{0} requires odd characteristic")]
    RequiresOddCharacteristic(&'static str),

    #[error("{0} requires characteristic 2")]
    RequiresEvenCharacteristic(&'static str),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("generator rows are linearly dependent")]
    DependentGenerator,

    #[error("enumeration of {count} items exceeds the limit of {limit}")]
    EnumerationBound { count: u128, limit: u128 },

    #[error("code has fewer than two codewords; minimum distance is undefined")]
    TrivialCode,

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("operator is not Hermitian (max |M - M^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("operator trace {trace} differs from 1")]
    TraceNotUnit { trace: f64 },

    #[error("malformed face label: {0}")]
    MalformedLabel(String),

    #[error("face labels are defined over different basis subsets")]
    BasisSubsetMismatch,

    #[error("conjugated projector in basis {basis} matches no basis vector (best overlap {best})")]
    OrbitMatch { basis: String, best: f64 },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
