use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the curvature kernels and the lookup tables.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurvatureError {
    #[error("image is {width}x{height}, need at least {min_width}x{min_height}")]
    DimensionTooSmall {
        width: usize,
        height: usize,
        min_width: usize,
        min_height: usize,
    },
    #[error("pixel buffer has {actual} samples, expected {expected}")]
    BufferSize { expected: usize, actual: usize },
    #[error("pixel ({x}, {y}) is outside the valid region of a {width}x{height} image")]
    OutOfBounds {
        x: usize,
        y: usize,
        width: usize,
        height: usize,
    },
    #[error("pixel size must be positive and finite, got {0}")]
    InvalidPixelSize(f64),
    #[error("lookup tables are indexed by integer differences with unit pixel size, got h = {0}")]
    LutIncompatibleConfig(f64),
    #[error("threshold must lie in 1..=255, got {0}")]
    InvalidThreshold(u32),
    #[error("intensity difference {0} is outside [-255, 255]")]
    DifferenceOutOfRange(i32),
    #[error("field contains a non-finite value at index {0}")]
    NonFinite(usize),
}

/// Errors raised while reading or writing images, fields and tables.
#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed file: {0}")]
    Malformed(String),
    #[error("unsupported bit depth: maxval {0} (only 8-bit grayscale is supported)")]
    UnsupportedDepth(u32),
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
}

impl IoError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        IoError::Io {
            path: path.into(),
            source,
        }
    }
}
