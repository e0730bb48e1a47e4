use std::path::PathBuf;

/// Errors shared by every module of the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A 128-bit accumulator overflowed; the result does not fit the
    /// supported integer range.
    #[error("value out of range: {0}")]
    Range(String),

    /// A divisor-set materialization would exceed the per-call cap.
    #[error("divisor set of {n} under {system} has {count} elements, above the cap {cap}")]
    TooManyDivisors {
        n: u64,
        system: &'static str,
        count: u128,
        cap: u64,
    },

    /// Inversion requested for a table with f(1) = 0.
    #[error("no convolution inverse exists: f(1) = 0")]
    NoInverse,

    /// A value table does not cover the requested range.
    #[error("table covers 1..={covered}, but 1..={requested} was requested")]
    TableTooShort { covered: u64, requested: u64 },

    #[error("argument outside the supported domain: {0}")]
    Domain(String),

    /// A zeta factor vanished where the product formula needs its inverse.
    #[error("singular point: {0}")]
    Singular(String),

    #[error("parse error at {path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    /// A checkpoint file does not match the scan it is resumed into.
    #[error("checkpoint mismatch: {0}")]
    CheckpointMismatch(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
