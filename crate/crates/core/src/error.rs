use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("product has no positive-negative shape")]
    NotPositiveNegativeShape,
    #[error("top element X is unavailable in this flavor")]
    TopUnavailable,
    #[error("closure violation: {0}")]
    ClosureViolation(String),
    #[error("bad depth: n = {n} exceeds |alpha| = {len}")]
    BadDepth { n: usize, len: usize },
    #[error("unsupported backend: {0}")]
    UnsupportedBackend(String),
    #[error("not in domain: {0}")]
    NotInDomain(String),
    #[error("inconsistent arrow: {0}")]
    Inconsistent(String),
    #[error("depth insufficient: {0}")]
    DepthInsufficient(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("graph has a sink: {0}")]
    HasSink(String),
    #[error("no inverse declared")]
    NotInvertible,
    #[error("word outside the language: {0}")]
    OutsideLanguage(String),
    #[error("ring or flavor mismatch")]
    RingMismatch,
    #[error("presentation is not right-resolving at {0}")]
    NotRightResolving(String),
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("config error: {0}")]
    Config(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
