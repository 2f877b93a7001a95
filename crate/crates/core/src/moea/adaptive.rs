//! Mutation-rate control from brightness-gene diversity.

use crate::moea::Population;

/// Upper limit of the boosted mutation rate.
pub const MAX_BOOSTED_RATE: f64 = 0.5;

/// Population standard deviation (divide by `n`) of the brightness genes.
pub fn brightness_std(pop: &Population) -> f64 {
    let n = pop.members.len();
    if n == 0 {
        return 0.0;
    }
    let mean = pop.members.iter().map(|m| m.params.b).sum::<f64>() / n as f64;
    let var = pop
        .members
        .iter()
        .map(|m| (m.params.b - mean).powi(2))
        .sum::<f64>()
        / n as f64;
    var.sqrt()
}

/// Doubles `base_rate` (capped at 0.5) when the brightness spread falls
/// below `threshold`.
pub fn boosted_rate(sigma_b: f64, base_rate: f64, threshold: f64) -> f64 {
    if sigma_b < threshold {
        MAX_BOOSTED_RATE.min(2.0 * base_rate)
    } else {
        base_rate
    }
}

pub fn adaptive_mutation_rate(pop: &Population, base_rate: f64, threshold: f64) -> f64 {
    boosted_rate(brightness_std(pop), base_rate, threshold)
}
