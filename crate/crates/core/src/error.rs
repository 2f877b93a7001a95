use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the enhancement engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot decode image {path}: {source}")]
    Decode {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    #[error("cannot encode image {path}: {source}")]
    Encode {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    #[error("invalid image dimensions {width}x{height}")]
    InvalidDimensions { width: usize, height: usize },

    #[error("pixel buffer has {actual} values, expected {expected}")]
    BufferLength { expected: usize, actual: usize },

    #[error("pixel value {0} is outside [0, 1] or not finite")]
    PixelOutOfRange(f64),

    #[error("histogram is empty")]
    EmptyHistogram,

    #[error("contrast factor must be positive and finite, got {0}")]
    NonPositiveContrast(f64),

    #[error("gamma must be positive and finite, got {0}")]
    NonPositiveGamma(f64),

    #[error("brightness shift must be finite, got {0}")]
    NonFiniteBrightness(f64),

    #[error("parameter {name} = {value} outside [{lo}, {hi}]")]
    ParamOutOfBounds {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("feature vectors are not comparable: {0}")]
    FeatureMismatch(String),

    #[error("feature model error: {0}")]
    Model(String),

    #[error("individual {0} has no fitness")]
    MissingFitness(usize),

    #[error("population has not been ranked")]
    Unsorted,

    #[error("cannot select from an empty front")]
    EmptyFront,

    #[error("image dimensions differ: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),

    #[error("image {width}x{height} is smaller than the {window}x{window} window")]
    ImageTooSmall {
        width: usize,
        height: usize,
        window: usize,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("report serialization failed: {0}")]
    Report(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
