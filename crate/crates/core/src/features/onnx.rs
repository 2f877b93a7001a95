//! ONNX-backed convolutional trunk.
//!
//! Model contract: the first graph input takes a `1x3xSxS` float tensor
//! (`S = input_size`, RGB, ImageNet-normalized) and the first graph output
//! is either `1xC` (already pooled) or a `1xCxhxw` feature map, which is
//! reduced per channel with the configured [`Pooling`].

use std::path::Path;

use image::imageops::{self, FilterType};
use image::{ImageBuffer as RawImage, Rgb};
use tract_onnx::prelude::*;

use crate::error::{Error, Result};
use crate::features::{ExtractorSpec, FeatureExtractor, FeatureVector, Pooling};
use crate::image_core::ImageBuffer;

pub const IMAGENET_MEAN: [f32; 3] = [0.485, 0.456, 0.406];
pub const IMAGENET_STD: [f32; 3] = [0.229, 0.224, 0.225];

type Plan = std::sync::Arc<TypedRunnableModel>;

pub struct DeepExtractor {
    plan: Plan,
    input_size: usize,
    pooled_dim: usize,
    pooling: Pooling,
    id: String,
}

impl std::fmt::Debug for DeepExtractor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DeepExtractor")
            .field("id", &self.id)
            .field("input_size", &self.input_size)
            .field("pooled_dim", &self.pooled_dim)
            .field("pooling", &self.pooling)
            .finish()
    }
}

fn model_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Model(format!("{}: {e}", path.display()))
}

impl DeepExtractor {
    pub fn load(spec: &ExtractorSpec) -> Result<Self> {
        let path = spec
            .model_path
            .as_deref()
            .ok_or_else(|| Error::Config("deep-model extractor requires model_path".into()))?;
        if !path.is_file() {
            return Err(Error::Model(format!("model file {} not found", path.display())));
        }
        let s = spec.input_size;
        let plan = tract_onnx::onnx()
            .model_for_path(path)
            .and_then(|m| m.with_input_fact(0, f32::fact([1, 3, s, s]).into()))
            .and_then(|m| m.into_optimized())
            .and_then(|m| m.into_runnable())
            .map_err(|e| model_err(path, e))?;
        let pooling = match spec.pooling {
            Pooling::Average => "avg",
            Pooling::Max => "max",
        };
        Ok(Self {
            plan,
            input_size: s,
            pooled_dim: spec.pooled_dim,
            pooling: spec.pooling,
            id: format!("onnx:{}:{s}:{pooling}", path.display()),
        })
    }

    /// Resized, normalized NCHW input tensor.
    fn preprocess(&self, img: &ImageBuffer) -> Tensor {
        let s = self.input_size;
        let raw: RawImage<Rgb<f32>, Vec<f32>> = RawImage::from_raw(
            img.width() as u32,
            img.height() as u32,
            img.data().iter().map(|&v| v as f32).collect(),
        )
        .expect("buffer length is validated at construction");
        let resized = if img.width() == s && img.height() == s {
            raw
        } else {
            imageops::resize(&raw, s as u32, s as u32, FilterType::Triangle)
        };
        tract_ndarray::Array4::from_shape_fn((1, 3, s, s), |(_, c, y, x)| {
            (resized.get_pixel(x as u32, y as u32)[c] - IMAGENET_MEAN[c]) / IMAGENET_STD[c]
        })
        .into()
    }

    fn pool(&self, output: &Tensor) -> Result<Vec<f64>> {
        let view = output
            .to_plain_array_view::<f32>()
            .map_err(|e| Error::Model(format!("unexpected output type: {e}")))?;
        let shape = view.shape().to_vec();
        let values: Vec<f64> = match shape.as_slice() {
            [1, c] => view.iter().take(*c).map(|&v| f64::from(v)).collect(),
            [1, c, h, w] if h * w > 0 => {
                let area = h * w;
                let flat: Vec<f32> = view.iter().copied().collect();
                flat.chunks_exact(area)
                    .take(*c)
                    .map(|ch| match self.pooling {
                        Pooling::Average => ch.iter().map(|&v| f64::from(v)).sum::<f64>() / area as f64,
                        Pooling::Max => ch.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(f64::from(v))),
                    })
                    .collect()
            }
            _ => return Err(Error::Model(format!("unsupported output shape {shape:?}"))),
        };
        if values.len() != self.pooled_dim {
            return Err(Error::Model(format!(
                "model produces {} channels, expected pooled_dim {}",
                values.len(),
                self.pooled_dim
            )));
        }
        Ok(values)
    }
}

impl FeatureExtractor for DeepExtractor {
    fn id(&self) -> &str {
        &self.id
    }

    fn dim(&self) -> usize {
        self.pooled_dim
    }

    fn extract(&self, img: &ImageBuffer) -> Result<FeatureVector> {
        let input = self.preprocess(img);
        let outputs = self
            .plan
            .run(tvec!(input.into()))
            .map_err(|e| Error::Model(e.to_string()))?;
        let first = outputs
            .first()
            .ok_or_else(|| Error::Model("model has no outputs".into()))?;
        FeatureVector::new(self.pool(first)?, self.id.clone())
    }
}

/// Loads the model described by `spec` and extracts one vector.
pub fn extract_deep(img: &ImageBuffer, spec: &ExtractorSpec) -> Result<FeatureVector> {
    DeepExtractor::load(spec)?.extract(img)
}
