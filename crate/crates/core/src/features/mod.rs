//! Feature extraction and the feature-distance objective.
//!
//! Two extractors implement [`FeatureExtractor`]:
//!
//! * [`DeepExtractor`] (feature `onnx`) runs a convolutional trunk stored as
//!   an ONNX model and pools its final feature map per channel;
//! * [`FallbackExtractor`] computes cheap, hand-checkable features so the
//!   optimizer works without any model file.

use std::path::PathBuf;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image_core::ImageBuffer;

mod fallback;
#[cfg(feature = "onnx")]
mod onnx;

pub use fallback::{extract_fallback, FallbackExtractor, FALLBACK_DIM, FALLBACK_GRID, GRADIENT_BINS};
#[cfg(feature = "onnx")]
pub use onnx::{extract_deep, DeepExtractor, IMAGENET_MEAN, IMAGENET_STD};

/// A fixed-length feature vector tagged with the extractor that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub values: Vec<f64>,
    pub extractor_id: String,
}

impl FeatureVector {
    pub fn new(values: Vec<f64>, extractor_id: impl Into<String>) -> Result<Self> {
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Model(format!("non-finite feature value {bad}")));
        }
        Ok(Self {
            values,
            extractor_id: extractor_id.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Euclidean distance between two vectors from the same extractor.
pub fn feature_distance(a: &FeatureVector, b: &FeatureVector) -> Result<f64> {
    if a.extractor_id != b.extractor_id {
        return Err(Error::FeatureMismatch(format!(
            "extractor {} vs {}",
            a.extractor_id, b.extractor_id
        )));
    }
    if a.len() != b.len() {
        return Err(Error::FeatureMismatch(format!(
            "length {} vs {}",
            a.len(),
            b.len()
        )));
    }
    Ok(a.values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt())
}

/// Maps an image to a feature vector. Implementations must be callable
/// concurrently and return the same result as a serial call.
pub trait FeatureExtractor: Send + Sync {
    /// Identifier stamped on every produced vector.
    fn id(&self) -> &str;

    /// Declared vector length.
    fn dim(&self) -> usize;

    fn extract(&self, img: &ImageBuffer) -> Result<FeatureVector>;
}

impl<T: FeatureExtractor + ?Sized> FeatureExtractor for Arc<T> {
    fn id(&self) -> &str {
        (**self).id()
    }

    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn extract(&self, img: &ImageBuffer) -> Result<FeatureVector> {
        (**self).extract(img)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtractorKind {
    DeepModel,
    Fallback,
}

/// How the spatial feature map is reduced to one value per channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pooling {
    #[default]
    Average,
    Max,
}

/// Extractor selection and model preprocessing settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExtractorSpec {
    pub kind: ExtractorKind,
    pub model_path: Option<PathBuf>,
    /// Side of the square model input.
    pub input_size: usize,
    /// Expected vector length `C`.
    pub pooled_dim: usize,
    pub pooling: Pooling,
}

impl Default for ExtractorSpec {
    fn default() -> Self {
        Self::fallback()
    }
}

impl ExtractorSpec {
    pub fn fallback() -> Self {
        Self {
            kind: ExtractorKind::Fallback,
            model_path: None,
            input_size: 224,
            pooled_dim: FALLBACK_DIM,
            pooling: Pooling::Average,
        }
    }

    /// A VGG16-style trunk: 224x224 input, 512 pooled channels.
    pub fn deep(model_path: impl Into<PathBuf>) -> Self {
        Self {
            kind: ExtractorKind::DeepModel,
            model_path: Some(model_path.into()),
            input_size: 224,
            pooled_dim: 512,
            pooling: Pooling::Average,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            ExtractorKind::DeepModel => {
                if self.model_path.is_none() {
                    return Err(Error::Config("deep-model extractor requires model_path".into()));
                }
                if self.pooled_dim == 0 || self.input_size == 0 {
                    return Err(Error::Config(
                        "pooled_dim and input_size must be positive".into(),
                    ));
                }
            }
            ExtractorKind::Fallback => {
                if self.pooled_dim != FALLBACK_DIM {
                    return Err(Error::Config(format!(
                        "fallback extractor has dimension {FALLBACK_DIM}, got pooled_dim {}",
                        self.pooled_dim
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Instantiates the extractor described by `spec`.
pub fn build_extractor(spec: &ExtractorSpec) -> Result<Arc<dyn FeatureExtractor>> {
    spec.validate()?;
    match spec.kind {
        ExtractorKind::Fallback => Ok(Arc::new(FallbackExtractor)),
        #[cfg(feature = "onnx")]
        ExtractorKind::DeepModel => Ok(Arc::new(DeepExtractor::load(spec)?)),
        #[cfg(not(feature = "onnx"))]
        ExtractorKind::DeepModel => Err(Error::Config(
            "deep-model extractor requires the `onnx` feature".into(),
        )),
    }
}
