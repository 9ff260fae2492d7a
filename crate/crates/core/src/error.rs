use thiserror::Error;

/// Errors raised by image construction, codecs, and the thresholding pipelines.
#[derive(Debug, Error, PartialEq)]
pub enum Error {
    #[error("image dimensions must be at least 1x1")]
    ZeroDimensions,
    #[error("pixel buffer holds {got} samples, expected {expected}")]
    DataSizeMismatch { expected: usize, got: usize },
    #[error("operands have different dimensions: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),

    #[error("not a PGM stream: bad magic number")]
    BadMagic,
    #[error("unsupported maxval {0}: only 8-bit images (maxval <= 255) are supported")]
    UnsupportedMaxval(u32),
    #[error("malformed PGM header: {0}")]
    InvalidHeader(&'static str),
    #[error("PGM pixel data is truncated: got {got} of {expected} samples")]
    TruncatedData { expected: usize, got: usize },
    #[error("PGM sample value {0} exceeds maxval {1}")]
    SampleOutOfRange(u32, u32),

    #[error("window side length {0} must be odd")]
    EvenWindow(usize),
    #[error("window side length must be at least 1")]
    ZeroWindow,

    #[error("histogram is degenerate: fewer than two grey values are populated")]
    DegenerateHistogram,
    #[error("no pixels above the threshold: white class is empty")]
    NoWhiteClass,
    #[error("white-class mean {0} does not exceed the threshold {1}")]
    InvalidWhiteMean(f64, u8),
    #[error("alpha {0} is out of range: must satisfy 0.5 < alpha < 1")]
    InvalidAlpha(f64),
    #[error("band parameter {0} must be positive")]
    NonPositiveBand(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
