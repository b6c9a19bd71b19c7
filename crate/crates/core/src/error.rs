use thiserror::Error;

/// Errors raised by the word kernel and the constructions built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed letter {index} for rank {rank}")]
    MalformedLetter { index: i64, rank: u32 },
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: u32, right: u32 },
    #[error("operation requires a nontrivial word")]
    EmptyWord,
    #[error("missing image for generator {0}")]
    MissingImage(u32),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("degenerate cylinder: {0}")]
    DegenerateCylinder(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("pattern violation: {0}")]
    Pattern(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("cap exceeded: {what} ({value} > {cap})")]
    CapExceeded { what: &'static str, value: u64, cap: u64 },
    #[error("invariant failure: {0}")]
    Invariant(String),
    #[error("unknown name: {0}")]
    Unknown(String),
}

pub type Result<T> = std::result::Result<T, Error>;
