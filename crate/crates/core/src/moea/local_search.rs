//! Memetic hill climbing on a single individual.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::enhance::{clip_params, EnhanceParams, ParamBounds};
use crate::error::{Error, Result};
use crate::fitness::Objective;
use crate::moea::Individual;

/// Runs `steps` proposals of `params + N(0, (sigma_fraction * range)^2)` per
/// gene (clipped), each drawn around the best point so far. A proposal is
/// accepted only if it is lexicographically better on `(f1, f2)`.
pub fn local_search<O, R>(
    ind: &Individual,
    steps: usize,
    sigma_fraction: f64,
    bounds: &ParamBounds,
    objective: &O,
    rng: &mut R,
) -> Result<Individual>
where
    O: Objective + ?Sized,
    R: Rng + ?Sized,
{
    let mut best = ind.clone();
    let mut best_fit = ind.fitness.ok_or(Error::MissingFitness(0))?;
    let sigma = bounds.ranges().map(|r| r * sigma_fraction);
    for _ in 0..steps {
        let mut genes = best.params.genes();
        for (g, s) in genes.iter_mut().zip(sigma) {
            let z: f64 = rng.sample(StandardNormal);
            *g += z * s;
        }
        let candidate = clip_params(&EnhanceParams::from_genes(genes), bounds);
        let eval = objective.evaluate(&candidate)?;
        if eval.fitness.lex_better(&best_fit) {
            best_fit = eval.fitness;
            best.params = candidate;
            best.fitness = Some(eval.fitness);
            best.stats = Some(eval.stats);
        }
    }
    Ok(best)
}
