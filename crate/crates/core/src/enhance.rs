//! Brightness shift, contrast scale and gamma correction.
//!
//! Every stage is a monotone per-pixel map followed by clamping into
//! `[0, 1]`, and all three channels are treated identically.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image_core::ImageBuffer;

/// The genome searched by the optimizer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnhanceParams {
    /// Brightness shift in 8-bit units (added as `b / 255`).
    pub b: f64,
    /// Contrast factor.
    pub c: f64,
    /// Gamma; pixels are raised to `1 / gamma`.
    pub gamma: f64,
}

impl EnhanceParams {
    pub const IDENTITY: EnhanceParams = EnhanceParams {
        b: 0.0,
        c: 1.0,
        gamma: 1.0,
    };

    pub const fn new(b: f64, c: f64, gamma: f64) -> Self {
        Self { b, c, gamma }
    }

    pub fn genes(&self) -> [f64; 3] {
        [self.b, self.c, self.gamma]
    }

    pub fn from_genes(g: [f64; 3]) -> Self {
        Self::new(g[0], g[1], g[2])
    }
}

/// Closed search interval of each gene.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ParamBounds {
    pub b_lo: f64,
    pub b_hi: f64,
    pub c_lo: f64,
    pub c_hi: f64,
    pub g_lo: f64,
    pub g_hi: f64,
}

impl Default for ParamBounds {
    fn default() -> Self {
        Self {
            b_lo: -10.0,
            b_hi: 60.0,
            c_lo: 1.0,
            c_hi: 2.0,
            g_lo: 1.0,
            g_hi: 2.0,
        }
    }
}

const GENE_NAMES: [&str; 3] = ["b", "c", "gamma"];

impl ParamBounds {
    pub fn lower(&self) -> [f64; 3] {
        [self.b_lo, self.c_lo, self.g_lo]
    }

    pub fn upper(&self) -> [f64; 3] {
        [self.b_hi, self.c_hi, self.g_hi]
    }

    /// Width of each gene's interval.
    pub fn ranges(&self) -> [f64; 3] {
        let (lo, hi) = (self.lower(), self.upper());
        [hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]]
    }

    /// Each interval must be finite with `lo < hi`, and the contrast and gamma
    /// intervals must stay strictly positive.
    pub fn validate(&self) -> Result<()> {
        for ((name, lo), hi) in GENE_NAMES.iter().zip(self.lower()).zip(self.upper()) {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::Config(format!(
                    "bounds for {name} must be finite with lo < hi, got [{lo}, {hi}]"
                )));
            }
        }
        if self.c_lo <= 0.0 || self.g_lo <= 0.0 {
            return Err(Error::Config(
                "contrast and gamma lower bounds must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn check(&self, e: &EnhanceParams) -> Result<()> {
        let values = e.genes();
        for i in 0..3 {
            let (lo, hi) = (self.lower()[i], self.upper()[i]);
            if !(lo..=hi).contains(&values[i]) {
                return Err(Error::ParamOutOfBounds {
                    name: GENE_NAMES[i],
                    value: values[i],
                    lo,
                    hi,
                });
            }
        }
        Ok(())
    }

    pub fn contains(&self, e: &EnhanceParams) -> bool {
        self.check(e).is_ok()
    }
}

pub fn clip_params(e: &EnhanceParams, bounds: &ParamBounds) -> EnhanceParams {
    EnhanceParams {
        b: e.b.clamp(bounds.b_lo, bounds.b_hi),
        c: e.c.clamp(bounds.c_lo, bounds.c_hi),
        gamma: e.gamma.clamp(bounds.g_lo, bounds.g_hi),
    }
}

/// `clamp(I + b/255, 0, 1)`.
pub fn apply_brightness(img: &ImageBuffer, b: f64) -> Result<ImageBuffer> {
    if !b.is_finite() {
        return Err(Error::NonFiniteBrightness(b));
    }
    let shift = b / 255.0;
    Ok(img.map_clamped(|v| v + shift))
}

/// `clamp(c * I, 0, 1)`.
pub fn apply_contrast(img: &ImageBuffer, c: f64) -> Result<ImageBuffer> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::NonPositiveContrast(c));
    }
    Ok(img.map_clamped(|v| c * v))
}

/// `clamp(I^(1/gamma), 0, 1)`, with `0^(1/gamma) = 0`.
pub fn apply_gamma(img: &ImageBuffer, gamma: f64) -> Result<ImageBuffer> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::NonPositiveGamma(gamma));
    }
    let exponent = 1.0 / gamma;
    if exponent == 1.0 {
        return Ok(img.clone());
    }
    Ok(img.map_clamped(|v| if v == 0.0 { 0.0 } else { v.powf(exponent) }))
}

/// Brightness, then contrast, then gamma.
///
/// Only the operator preconditions are checked here; callers searching a
/// bounded space clip with [`clip_params`] or check with [`ParamBounds::check`].
pub fn enhance(img: &ImageBuffer, e: &EnhanceParams) -> Result<ImageBuffer> {
    let bright = apply_brightness(img, e.b)?;
    let contrasted = apply_contrast(&bright, e.c)?;
    apply_gamma(&contrasted, e.gamma)
}
