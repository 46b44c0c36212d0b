use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("size {0} is not a nonzero power of two")]
    InvalidSize(usize),
    #[error("input is empty")]
    EmptyInput,
    #[error("non-finite value at index {0}")]
    NonFinite(usize),
    #[error("expected {expected} values, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("invalid topology: {nproc} workers for {n} samples (both must be powers of two, nproc <= n)")]
    InvalidTopology { n: usize, nproc: usize },
    #[error("corrupt message: {rows} rows but {re_len} real / {im_len} imaginary entries")]
    CorruptMessage {
        rows: usize,
        re_len: usize,
        im_len: usize,
    },
    #[error("no channel between worker {from} and worker {to}")]
    NoChannel { from: usize, to: usize },
    #[error("worker {0} failed")]
    WorkerFailed(usize),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("grid dimensions {rows}x{cols} do not match {len} values")]
    InvalidGrid { rows: usize, cols: usize, len: usize },
    #[error("dimension mismatch: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    DimMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("pixel value {value} exceeds maximum {max_val}")]
    PixelOutOfRange { value: u32, max_val: u16 },
    #[error("invalid PGM at byte {offset}: {reason}")]
    PgmParse { offset: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
