//! Bi-objective fitness, both coordinates minimized:
//!
//! * `f1 = -entropy(enhanced)`;
//! * `f2 = ||F(original) - F(enhanced)||_2 + lambda * brightness_penalty(enhanced)`.

use serde::{Deserialize, Serialize};

use crate::enhance::{enhance, EnhanceParams, ParamBounds};
use crate::error::{Error, Result};
use crate::features::{feature_distance, FeatureExtractor, FeatureVector};
use crate::image_core::{image_entropy, mean_brightness, ImageBuffer};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitnessPair {
    /// Negated entropy in bits.
    pub f1: f64,
    /// Feature distance plus weighted brightness penalty.
    pub f2: f64,
}

impl FitnessPair {
    pub const fn new(f1: f64, f2: f64) -> Self {
        Self { f1, f2 }
    }

    pub fn entropy(&self) -> f64 {
        -self.f1
    }

    /// `(f1, f2)` compared lexicographically; true if `self` is strictly smaller.
    pub fn lex_better(&self, other: &FitnessPair) -> bool {
        self.f1 < other.f1 || (self.f1 == other.f1 && self.f2 < other.f2)
    }
}

/// Pareto dominance under minimization.
pub fn dominates(a: &FitnessPair, b: &FitnessPair) -> bool {
    a.f1 <= b.f1 && a.f2 <= b.f2 && (a.f1 < b.f1 || a.f2 < b.f2)
}

/// Two-sided brightness band and its weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PenaltyConfig {
    pub lo: f64,
    pub hi: f64,
    pub lambda: f64,
}

impl Default for PenaltyConfig {
    fn default() -> Self {
        Self {
            lo: 0.35,
            hi: 0.7,
            lambda: 30.0,
        }
    }
}

impl PenaltyConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0 <= self.lo && self.lo < self.hi && self.hi <= 1.0) {
            return Err(Error::Config(format!(
                "brightness band must satisfy 0 <= lo < hi <= 1, got [{}, {}]",
                self.lo, self.hi
            )));
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Error::Config(format!(
                "penalty weight must be finite and non-negative, got {}",
                self.lambda
            )));
        }
        Ok(())
    }

    /// Distance from `m` to the band; zero inside it.
    pub fn distance_to_band(&self, m: f64) -> f64 {
        brightness_penalty(m, self)
    }
}

/// `max(0, lo - m) + max(0, m - hi)`.
pub fn brightness_penalty(m: f64, cfg: &PenaltyConfig) -> f64 {
    (cfg.lo - m).max(0.0) + (m - cfg.hi).max(0.0)
}

/// Statistics of an enhanced image kept alongside its fitness.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EnhancedStats {
    pub entropy: f64,
    pub mean_brightness: f64,
    pub feature_distance: f64,
    pub penalty: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub fitness: FitnessPair,
    pub stats: EnhancedStats,
}

impl Evaluation {
    /// An evaluation with only the fitness filled in.
    pub fn from_fitness(fitness: FitnessPair) -> Self {
        Self {
            fitness,
            stats: EnhancedStats::default(),
        }
    }
}

/// Anything the evolutionary engine can minimize over the parameter space.
pub trait Objective: Sync {
    fn evaluate(&self, params: &EnhanceParams) -> Result<Evaluation>;
}

impl<F> Objective for F
where
    F: Fn(&EnhanceParams) -> Result<Evaluation> + Sync,
{
    fn evaluate(&self, params: &EnhanceParams) -> Result<Evaluation> {
        self(params)
    }
}

/// Enhances `original` with `e` and scores the result.
pub fn evaluate(
    e: &EnhanceParams,
    original: &ImageBuffer,
    f0: &FeatureVector,
    extractor: &dyn FeatureExtractor,
    cfg: &PenaltyConfig,
) -> Result<Evaluation> {
    let enhanced = enhance(original, e)?;
    let entropy = image_entropy(&enhanced);
    let distance = feature_distance(f0, &extractor.extract(&enhanced)?)?;
    let m = mean_brightness(&enhanced);
    let penalty = brightness_penalty(m, cfg);
    Ok(Evaluation {
        fitness: FitnessPair::new(-entropy, distance + cfg.lambda * penalty),
        stats: EnhancedStats {
            entropy,
            mean_brightness: m,
            feature_distance: distance,
            penalty,
        },
    })
}

/// The fitness of a single image: original, its reference features, the
/// extractor, the penalty and the admissible parameter box.
pub struct ImageObjective<'a> {
    original: &'a ImageBuffer,
    reference: FeatureVector,
    extractor: &'a dyn FeatureExtractor,
    penalty: PenaltyConfig,
    bounds: ParamBounds,
}

impl<'a> ImageObjective<'a> {
    pub fn new(
        original: &'a ImageBuffer,
        extractor: &'a dyn FeatureExtractor,
        penalty: PenaltyConfig,
        bounds: ParamBounds,
    ) -> Result<Self> {
        penalty.validate()?;
        bounds.validate()?;
        let reference = extractor.extract(original)?;
        Ok(Self {
            original,
            reference,
            extractor,
            penalty,
            bounds,
        })
    }

    pub fn original(&self) -> &ImageBuffer {
        self.original
    }

    pub fn reference_features(&self) -> &FeatureVector {
        &self.reference
    }
}

impl Objective for ImageObjective<'_> {
    fn evaluate(&self, params: &EnhanceParams) -> Result<Evaluation> {
        self.bounds.check(params)?;
        evaluate(params, self.original, &self.reference, self.extractor, &self.penalty)
    }
}
