use thiserror::Error;

/// Errors produced by the enhancement pipeline and its file formats.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("image has {pixels} pixels, more than the supported maximum of {max}")]
    ImageTooLarge { pixels: u64, max: u64 },

    #[error("invalid image dimensions {width}x{height} for {len} pixels")]
    InvalidDimensions { width: u32, height: u32, len: usize },

    #[error("invalid segment bounds [{lo}, {hi}]")]
    InvalidBounds { lo: u8, hi: u8 },

    #[error("image dimensions differ: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(u32, u32, u32, u32),

    #[error("malformed PGM header: {0}")]
    MalformedHeader(String),

    #[error("unsupported maxval {0} (only 255 is accepted)")]
    UnsupportedMaxval(u32),

    #[error("malformed pixel data: {0}")]
    MalformedData(String),

    #[error("truncated pixel data: expected {expected} samples, found {found}")]
    TruncatedData { expected: usize, found: usize },

    #[error("malformed map file at line {line}: {reason}")]
    MalformedMapFile { line: usize, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
