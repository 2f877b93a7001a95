//! Training-free, per-image low-light enhancement.
//!
//! Each image is enhanced by a three-parameter operator (brightness shift,
//! contrast scale, gamma). The parameters are searched with an NSGA-II
//! engine over two minimized objectives:
//!
//! * `f1 = -entropy` of the grayscale histogram of the enhanced image;
//! * `f2 = ||F(original) - F(enhanced)||_2 + lambda * brightness_penalty`,
//!   where `F` is a feature extractor (an ONNX convolutional trunk, or a
//!   deterministic fallback when no model is available).
//!
//! A memetic hill-climbing step refines the best members each generation,
//! and the mutation rate doubles when the brightness genes lose diversity.
//!
//! The crate is organized as:
//!
//! * [`image_core`]: pixel buffers, grayscale, histograms, entropy, brightness;
//! * [`enhance`]: the brightness/contrast/gamma operator and its bounds;
//! * [`features`]: feature extractors and the feature distance;
//! * [`fitness`]: the bi-objective fitness and Pareto dominance;
//! * [`moea`]: the NSGA-II engine with adaptive mutation and local search;
//! * [`metrics`]: PSNR, SSIM and per-image reports;
//! * [`batch`]: directory-level batch runs (used by the `enhance` binary).
//!
//! Runnable walkthroughs live in the crate's `examples/` directory.

pub mod batch;
pub mod enhance;
pub mod error;
pub mod features;
pub mod fitness;
pub mod image_core;
pub mod metrics;
pub mod moea;
pub mod synthetic;

pub use crate::enhance::{EnhanceParams, ParamBounds};
pub use crate::error::{Error, Result};
pub use crate::features::{ExtractorSpec, FeatureExtractor, FeatureVector};
pub use crate::fitness::{FitnessPair, PenaltyConfig};
pub use crate::image_core::{GrayHistogram, GrayImage, ImageBuffer};
pub use crate::moea::{EvolutionConfig, EvolutionResult, Individual, Population};
