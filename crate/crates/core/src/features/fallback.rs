//! Deterministic, model-free features.
//!
//! The vector has `FALLBACK_DIM = 272` entries:
//!
//! 1. the BT.601 grayscale image downsampled to a 16x16 grid by exact area
//!    averaging (row-major, 256 values). Grid cell `(i, j)` covers the real
//!    interval `[i*H/16, (i+1)*H/16) x [j*W/16, (j+1)*W/16)` of the source,
//!    and every source pixel contributes in proportion to its overlap;
//! 2. a 16-bin histogram of forward-difference gradient magnitudes,
//!    normalized to sum to 1. With `gx = y(x+1, y) - y(x, y)` (0 on the last
//!    column) and `gy` likewise (0 on the last row), the magnitude
//!    `sqrt(gx^2 + gy^2)` lies in `[0, sqrt(2)]` and falls into bin
//!    `min(15, floor(m / sqrt(2) * 16))`.

use crate::error::Result;
use crate::features::{FeatureExtractor, FeatureVector};
use crate::image_core::{to_grayscale, GrayImage, ImageBuffer};

pub const FALLBACK_GRID: usize = 16;
pub const GRADIENT_BINS: usize = 16;
pub const FALLBACK_DIM: usize = FALLBACK_GRID * FALLBACK_GRID + GRADIENT_BINS;

const FALLBACK_ID: &str = "fallback-grid16-grad16";

#[derive(Debug, Clone, Copy, Default)]
pub struct FallbackExtractor;

impl FeatureExtractor for FallbackExtractor {
    fn id(&self) -> &str {
        FALLBACK_ID
    }

    fn dim(&self) -> usize {
        FALLBACK_DIM
    }

    fn extract(&self, img: &ImageBuffer) -> Result<FeatureVector> {
        Ok(extract_fallback(img))
    }
}

pub fn extract_fallback(img: &ImageBuffer) -> FeatureVector {
    let gray = to_grayscale(img);
    let mut values = area_downsample(&gray, FALLBACK_GRID);
    values.extend(gradient_histogram(&gray));
    FeatureVector {
        values,
        extractor_id: FALLBACK_ID.to_string(),
    }
}

/// Overlap weights of source indices with output cell `cell`, in units where
/// a source pixel spans `grid` and a cell spans `len`.
fn overlaps(cell: usize, len: usize, grid: usize) -> impl Iterator<Item = (usize, f64)> {
    let (start, end) = (cell * len, (cell + 1) * len);
    let first = start / grid;
    let last = end.div_ceil(grid);
    (first..last).filter_map(move |src| {
        let lo = (src * grid).max(start);
        let hi = ((src + 1) * grid).min(end);
        (hi > lo).then(|| (src, (hi - lo) as f64))
    })
}

fn area_downsample(gray: &GrayImage, grid: usize) -> Vec<f64> {
    let (w, h) = (gray.width, gray.height);
    let norm = (w * h) as f64;
    let mut out = Vec::with_capacity(grid * grid);
    for i in 0..grid {
        let rows: Vec<_> = overlaps(i, h, grid).collect();
        for j in 0..grid {
            let mut acc = 0.0;
            for (c, wc) in overlaps(j, w, grid) {
                let col: f64 = rows.iter().map(|&(r, wr)| wr * gray.get(c, r)).sum();
                acc += wc * col;
            }
            out.push(acc / norm);
        }
    }
    out
}

fn gradient_histogram(gray: &GrayImage) -> Vec<f64> {
    let (w, h) = (gray.width, gray.height);
    let mut counts = [0u64; GRADIENT_BINS];
    let max = std::f64::consts::SQRT_2;
    for y in 0..h {
        for x in 0..w {
            let v = gray.get(x, y);
            let gx = if x + 1 < w { gray.get(x + 1, y) - v } else { 0.0 };
            let gy = if y + 1 < h { gray.get(x, y + 1) - v } else { 0.0 };
            let m = (gx * gx + gy * gy).sqrt();
            let bin = ((m / max * GRADIENT_BINS as f64).floor() as usize).min(GRADIENT_BINS - 1);
            counts[bin] += 1;
        }
    }
    let total = (w * h) as f64;
    counts.iter().map(|&n| n as f64 / total).collect()
}
