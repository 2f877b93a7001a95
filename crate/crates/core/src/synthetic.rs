//! Seeded synthetic low-light scenes for demos and tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::image_core::ImageBuffer;

/// A dim scene: a tinted gradient, a few soft highlights and sensor-like
/// noise, scaled so every value stays below `peak`.
pub fn low_light_scene(width: usize, height: usize, peak: f64, seed: u64) -> ImageBuffer {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tint: [f64; 3] = std::array::from_fn(|_| rng.random_range(0.6..1.0));
    let angle: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let (dx, dy) = (angle.cos(), angle.sin());
    let blobs: Vec<(f64, f64, f64, f64)> = (0..rng.random_range(2..5))
        .map(|_| {
            (
                rng.random_range(0.0..width as f64),
                rng.random_range(0.0..height as f64),
                rng.random_range(0.08..0.3) * width.max(height) as f64,
                rng.random_range(0.3..1.0),
            )
        })
        .collect();
    let noise: Vec<f64> = (0..width * height * 3)
        .map(|_| rng.random_range(-0.04..0.04))
        .collect();

    let (w, h) = (width as f64, height as f64);
    ImageBuffer::from_fn(width, height, |x, y| {
        let (fx, fy) = (x as f64 / w, y as f64 / h);
        let ramp = 0.5 + 0.5 * ((fx - 0.5) * dx + (fy - 0.5) * dy);
        let glow: f64 = blobs
            .iter()
            .map(|&(bx, by, r, s)| {
                let d2 = (x as f64 - bx).powi(2) + (y as f64 - by).powi(2);
                s * (-d2 / (2.0 * r * r)).exp()
            })
            .sum();
        let base = (0.35 * ramp + 0.65 * glow.min(1.0)).clamp(0.0, 1.0);
        let i = (y * width + x) * 3;
        std::array::from_fn(|c| ((base * tint[c] + noise[i + c]) * peak).clamp(0.0, peak))
    })
    .expect("generated values lie in [0, peak]")
}
