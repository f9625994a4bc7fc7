use thiserror::Error;

/// Errors produced by the core library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cannot parse involution {input:?}: {reason} (at position {position})")]
    Parse {
        input: String,
        position: usize,
        reason: String,
    },
    #[error("size {n} out of range (allowed {min}..={max})")]
    Size { n: usize, min: usize, max: usize },
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("unsupported prime {p}; supported primes are {supported:?}")]
    UnsupportedPrime { p: u64, supported: Vec<u64> },
    #[error("codimension unstable for {pi}: {detail}")]
    Unstable { pi: String, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
