use alloc::string::String;

/// Errors raised by the code, search, decoding and simulation routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NonSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix entry is not finite")]
    NonFinite,
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("unknown code `{0}` (valid: q44, x48, x47, x46, q34, x38, x36)")]
    UnknownCode(String),
    #[error("symbol difference vector is all zero")]
    ZeroDifference,
    #[error("constellation has fewer than two points; nothing to search")]
    EmptySearch,
    #[error("code {0} has no overlay symbols; conditional decoding needs lambda >= 1")]
    NoOverlay(&'static str),
    #[error("at least one of min_bit_errors and max_codewords must be nonzero")]
    InvalidStop,
    #[error("OSTBC rate must satisfy 0 < R <= 1, got {0}")]
    InvalidRate(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = core::result::Result<T, Error>;
