use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("undefined double factorial: {0}!!")]
    UndefinedDoubleFactorial(i64),
    #[error("bernoulli number requested for odd index {0}")]
    OddBernoulli(u32),
    #[error("precision {0} exceeds the stored 100-digit constant")]
    PrecisionTooHigh(u32),
    #[error("undefined normalization for {0}: genus is not a non-negative integer")]
    UndefinedNormalization(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("degenerate product: factor {0} has a vanishing denominator")]
    DegenerateProduct(u32),
    #[error("not rational within cap: no rational function of degree <= {0} fits the samples")]
    NotRational(usize),
    #[error("empty feasible set for X={x}, n={n}")]
    EmptyFeasibleSet { x: u32, n: u32 },
    #[error("cache file version mismatch: expected `{expected}`, found `{found}`")]
    CacheVersion { expected: String, found: String },
    #[error("cache file line {line}: {msg}")]
    CacheLine { line: usize, msg: String },
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
