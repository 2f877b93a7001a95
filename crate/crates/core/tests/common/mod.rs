//! Brute-force reference implementations shared by the integration tests.
//! Each one is written from the definitions, without reusing library code
//! beyond the image container.

#![allow(dead_code)]

use std::collections::HashMap;

use nsga_enhance::fitness::{Evaluation, FitnessPair};
use nsga_enhance::{EnhanceParams, ImageBuffer, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_image(w: usize, h: usize, rng: &mut impl Rng) -> ImageBuffer {
    let data = (0..w * h * 3).map(|_| rng.random::<f64>()).collect();
    ImageBuffer::new(w, h, data).unwrap()
}

pub fn luma(p: [f64; 3]) -> f64 {
    (0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2]).clamp(0.0, 1.0)
}

pub fn luma_plane(img: &ImageBuffer) -> Vec<Vec<f64>> {
    (0..img.height())
        .map(|y| (0..img.width()).map(|x| luma(img.pixel(x, y))).collect())
        .collect()
}

/// Entropy in bits of the 256-level luma histogram, as `-sum p log2 p`.
pub fn entropy_oracle(img: &ImageBuffer) -> f64 {
    let mut counts: HashMap<i64, usize> = HashMap::new();
    for row in luma_plane(img) {
        for y in row {
            *counts.entry((y * 255.0).round() as i64).or_default() += 1;
        }
    }
    let n = img.pixel_count() as f64;
    -counts
        .values()
        .map(|&c| {
            let p = c as f64 / n;
            p * p.log2()
        })
        .sum::<f64>()
}

pub fn dominates_oracle(a: (f64, f64), b: (f64, f64)) -> bool {
    let no_worse = a.0 <= b.0 && a.1 <= b.1;
    let better = a.0 < b.0 || a.1 < b.1;
    no_worse && better
}

/// Fronts by repeated peeling of the currently non-dominated set.
pub fn peel_fronts(points: &[(f64, f64)]) -> Vec<Vec<usize>> {
    let mut remaining: Vec<usize> = (0..points.len()).collect();
    let mut fronts = Vec::new();
    while !remaining.is_empty() {
        let front: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&i| !remaining.iter().any(|&j| dominates_oracle(points[j], points[i])))
            .collect();
        remaining.retain(|i| !front.contains(i));
        fronts.push(front);
    }
    fronts
}

/// 16x16 area means computed by replicating every pixel into a 16x16 block,
/// after which each grid cell is an exact `w x h` block of the enlarged plane.
/// Followed by the normalized forward-difference gradient histogram.
pub fn fallback_oracle(img: &ImageBuffer) -> Vec<f64> {
    let plane = luma_plane(img);
    let (w, h) = (img.width(), img.height());
    let big = |x: usize, y: usize| plane[y / 16][x / 16];
    let mut out = Vec::new();
    for i in 0..16 {
        for j in 0..16 {
            let mut sum = 0.0;
            for y in i * h..(i + 1) * h {
                for x in j * w..(j + 1) * w {
                    sum += big(x, y);
                }
            }
            out.push(sum / (w * h) as f64);
        }
    }
    let mut hist = [0.0; 16];
    for y in 0..h {
        for x in 0..w {
            let right = if x + 1 < w { plane[y][x + 1] } else { plane[y][x] };
            let down = if y + 1 < h { plane[y + 1][x] } else { plane[y][x] };
            let m = (right - plane[y][x]).hypot(down - plane[y][x]);
            let bin = (16.0 * m / 2f64.sqrt()) as usize;
            hist[bin.min(15)] += 1.0;
        }
    }
    out.extend(hist.iter().map(|c| c / (w * h) as f64));
    out
}

/// Mean SSIM over every 11x11 window, computed window by window with a 2-D
/// Gaussian weight and centred second moments.
pub fn ssim_oracle(a: &ImageBuffer, b: &ImageBuffer) -> f64 {
    let x: Vec<Vec<f64>> = luma_plane(a).into_iter().map(|r| r.into_iter().map(|v| v * 255.0).collect()).collect();
    let y: Vec<Vec<f64>> = luma_plane(b).into_iter().map(|r| r.into_iter().map(|v| v * 255.0).collect()).collect();
    let mut win = [[0.0; 11]; 11];
    let mut total = 0.0;
    for (i, row) in win.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            let d2 = (i as f64 - 5.0).powi(2) + (j as f64 - 5.0).powi(2);
            *v = (-d2 / (2.0 * 1.5 * 1.5)).exp();
            total += *v;
        }
    }
    let (c1, c2) = ((0.01f64 * 255.0).powi(2), (0.03f64 * 255.0).powi(2));
    let (w, h) = (a.width(), a.height());
    let mut acc = 0.0;
    let mut count = 0;
    for oy in 0..=h - 11 {
        for ox in 0..=w - 11 {
            let mut mx = 0.0;
            let mut my = 0.0;
            for i in 0..11 {
                for j in 0..11 {
                    let wt = win[i][j] / total;
                    mx += wt * x[oy + i][ox + j];
                    my += wt * y[oy + i][ox + j];
                }
            }
            let (mut vx, mut vy, mut cxy) = (0.0, 0.0, 0.0);
            for i in 0..11 {
                for j in 0..11 {
                    let wt = win[i][j] / total;
                    let dx = x[oy + i][ox + j] - mx;
                    let dy = y[oy + i][ox + j] - my;
                    vx += wt * dx * dx;
                    vy += wt * dy * dy;
                    cxy += wt * dx * dy;
                }
            }
            acc += ((2.0 * mx * my + c1) * (2.0 * cxy + c2))
                / ((mx * mx + my * my + c1) * (vx + vy + c2));
            count += 1;
        }
    }
    acc / count as f64
}

/// A cheap objective with a known landscape: f1 rewards large `b`, f2 prefers
/// contrast near 1.5 and gamma near 1.2.
pub fn stub_objective(p: &EnhanceParams) -> Result<Evaluation> {
    let f1 = -p.b / 10.0 + 0.1 * (p.gamma - 1.0).powi(2);
    let f2 = (p.c - 1.5).powi(2) + (p.gamma - 1.2).powi(2) + 0.001 * p.b.abs();
    Ok(Evaluation::from_fitness(FitnessPair::new(f1, f2)))
}

pub fn lex_not_worse(new: FitnessPair, old: FitnessPair) -> bool {
    new.f1 < old.f1 || (new.f1 == old.f1 && new.f2 <= old.f2)
}
