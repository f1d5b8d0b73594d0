use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime below 2^31")]
    InvalidField(u32),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("rings differ: {0}")]
    RingMismatch(String),
    #[error("not a member of the submodule")]
    NotMember,
    #[error("unsupported base ring: {0}")]
    UnsupportedRing(String),
    #[error("degree {degree} lies outside the window [{lo}, {hi}] and cannot be generated")]
    OutsideWindow { degree: i64, lo: i64, hi: i64 },
    #[error("linear solve failed in degree {degree}: {context}")]
    SolveFailed { degree: i64, context: String },
    #[error("not a complex: composite of differentials nonzero at degree {0}")]
    NotAComplex(i64),
    #[error("not a chain map: square fails to commute at degree {0}")]
    NotAChainMap(i64),
    #[error("complete resolution failed: {0}")]
    CompleteResolution(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
