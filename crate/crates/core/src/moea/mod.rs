//! NSGA-II search over enhancement parameters.
//!
//! One run proceeds as:
//!
//! 1. initialize `N` members (slot 0 is the identity operator) and evaluate;
//! 2. for each generation `g = 1..=G`:
//!    * derive the mutation rate from the linear `p_m` schedule, doubled
//!      (capped at 0.5) when the brightness genes have collapsed;
//!    * breed `N` offspring by binary tournament, blend crossover with
//!      probability `p_c`, and Gaussian mutation;
//!    * evaluate offspring and keep the best `N` of parents plus offspring
//!      by front, then crowding distance;
//!    * hill-climb the top fraction of the survivors;
//! 3. return the rank-0 front and its highest-entropy member.
//!
//! Every random draw comes from one seeded stream in a fixed order.
//! Fitness evaluations run in parallel and never touch the stream, so a
//! seed fully determines the trace regardless of thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enhance::{EnhanceParams, ParamBounds};
use crate::error::{Error, Result};
use crate::features::FeatureExtractor;
use crate::fitness::{EnhancedStats, FitnessPair, ImageObjective, Objective, PenaltyConfig};
use crate::image_core::ImageBuffer;

mod adaptive;
mod local_search;
mod sort;
mod variation;

pub use adaptive::{adaptive_mutation_rate, boosted_rate, brightness_std, MAX_BOOSTED_RATE};
pub use local_search::local_search;
pub use sort::{
    assign_rank_and_crowding, crowding_distance, crowding_distances, nondominated_sort,
    select_survivors, sort_fitness,
};
pub use variation::{blend_crossover, gaussian_mutate, init_population, tournament_select};

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub params: EnhanceParams,
    pub fitness: Option<FitnessPair>,
    pub stats: Option<EnhancedStats>,
    /// Pareto front index, 0 = best.
    pub rank: Option<usize>,
    /// May be `+inf` for boundary members.
    pub crowding: Option<f64>,
}

impl Individual {
    pub fn new(params: EnhanceParams) -> Self {
        Self {
            params,
            fitness: None,
            stats: None,
            rank: None,
            crowding: None,
        }
    }

    pub fn evaluated(params: EnhanceParams, fitness: FitnessPair) -> Self {
        Self {
            fitness: Some(fitness),
            ..Self::new(params)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Population {
    pub members: Vec<Individual>,
    pub generation: usize,
}

/// Evolution hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvolutionConfig {
    pub pop_size: usize,
    pub generations: usize,
    pub crossover_prob: f64,
    /// Base mutation probability at generation 1.
    pub mutation_prob_start: f64,
    /// Base mutation probability at generation `G`; linear in between.
    pub mutation_prob_end: f64,
    pub local_search_steps: usize,
    pub local_search_fraction: f64,
    /// Local-search step size as a fraction of each gene's range.
    pub local_search_sigma_fraction: f64,
    pub blend_alpha: f64,
    /// Mutation step size as a fraction of each gene's range.
    pub mutation_sigma_fraction: f64,
    /// Brightness spread (in `b` units) below which mutation is boosted.
    pub diversity_threshold: f64,
    pub seed: u64,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        Self {
            pop_size: 50,
            generations: 5,
            crossover_prob: 0.85,
            mutation_prob_start: 0.3,
            mutation_prob_end: 0.2,
            local_search_steps: 8,
            local_search_fraction: 0.10,
            local_search_sigma_fraction: 0.02,
            blend_alpha: 0.5,
            mutation_sigma_fraction: 0.1,
            diversity_threshold: 5.0,
            seed: 0,
        }
    }
}

impl EvolutionConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.pop_size < 2 || !self.pop_size.is_multiple_of(2) {
            return bad(format!("pop_size must be even and >= 2, got {}", self.pop_size));
        }
        if self.generations == 0 {
            return bad("generations must be >= 1".into());
        }
        for (name, p) in [
            ("crossover_prob", self.crossover_prob),
            ("mutation_prob_start", self.mutation_prob_start),
            ("mutation_prob_end", self.mutation_prob_end),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} must lie in [0, 1], got {p}"));
            }
        }
        for (name, f) in [
            ("local_search_fraction", self.local_search_fraction),
            ("local_search_sigma_fraction", self.local_search_sigma_fraction),
            ("mutation_sigma_fraction", self.mutation_sigma_fraction),
        ] {
            if !(f > 0.0 && f <= 1.0) {
                return bad(format!("{name} must lie in (0, 1], got {f}"));
            }
        }
        if !(self.blend_alpha >= 0.0 && self.blend_alpha.is_finite()) {
            return bad(format!("blend_alpha must be >= 0, got {}", self.blend_alpha));
        }
        if !(self.diversity_threshold >= 0.0 && self.diversity_threshold.is_finite()) {
            return bad(format!(
                "diversity_threshold must be >= 0, got {}",
                self.diversity_threshold
            ));
        }
        Ok(())
    }

    /// Scheduled base mutation probability for generation `g` in `1..=G`.
    pub fn base_mutation_rate(&self, g: usize) -> f64 {
        if self.generations <= 1 {
            return self.mutation_prob_start;
        }
        let t = (g.clamp(1, self.generations) - 1) as f64 / (self.generations - 1) as f64;
        self.mutation_prob_start + t * (self.mutation_prob_end - self.mutation_prob_start)
    }

    /// Number of members refined by local search each generation.
    pub fn local_search_count(&self) -> usize {
        let k = (self.local_search_fraction * self.pop_size as f64 - 1e-9).ceil() as usize;
        k.clamp(1, self.pop_size)
    }
}

/// Per-generation summary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenerationStats {
    pub generation: usize,
    /// Highest entropy on the rank-0 front.
    pub best_entropy: f64,
    /// Lowest `f2` on the rank-0 front.
    pub best_f2: f64,
    pub mean_f2: f64,
    pub mutation_rate: f64,
    pub front_size: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionResult {
    pub best: Individual,
    /// Rank-0 front of the final population.
    pub front: Vec<Individual>,
    pub history: Vec<GenerationStats>,
    pub population: Population,
    pub evaluations: usize,
}

/// Highest entropy first (lowest `f1`), then lowest `f2`, then first listed.
pub fn select_representative(front: &[Individual]) -> Result<Individual> {
    let mut best: Option<(usize, FitnessPair)> = None;
    for (i, m) in front.iter().enumerate() {
        let f = m.fitness.ok_or(Error::MissingFitness(i))?;
        if best.is_none_or(|(_, b)| f.lex_better(&b)) {
            best = Some((i, f));
        }
    }
    best.map(|(i, _)| front[i].clone()).ok_or(Error::EmptyFront)
}

fn evaluate_missing<O: Objective + ?Sized>(objective: &O, members: &mut [Individual]) -> Result<usize> {
    let pending: Vec<usize> = (0..members.len())
        .filter(|&i| members[i].fitness.is_none())
        .collect();
    let results: Vec<_> = pending
        .par_iter()
        .map(|&i| objective.evaluate(&members[i].params))
        .collect();
    for (&i, r) in pending.iter().zip(results) {
        let eval = r?;
        members[i].fitness = Some(eval.fitness);
        members[i].stats = Some(eval.stats);
    }
    Ok(pending.len())
}

/// Indices ordered by rank, then larger crowding, then `(f1, f2)`, then index.
fn ranked_order(pop: &Population) -> Vec<usize> {
    let mut order: Vec<usize> = (0..pop.members.len()).collect();
    order.sort_by(|&a, &b| {
        let (ma, mb) = (&pop.members[a], &pop.members[b]);
        let (fa, fb) = (ma.fitness.unwrap_or(FitnessPair::new(f64::MAX, f64::MAX)), mb.fitness.unwrap_or(FitnessPair::new(f64::MAX, f64::MAX)));
        ma.rank
            .cmp(&mb.rank)
            .then(mb.crowding.unwrap_or(0.0).total_cmp(&ma.crowding.unwrap_or(0.0)))
            .then(fa.f1.total_cmp(&fb.f1))
            .then(fa.f2.total_cmp(&fb.f2))
            .then(a.cmp(&b))
    });
    order
}

fn generation_stats(pop: &Population, front: &[usize], rate: f64) -> GenerationStats {
    let fit = |i: usize| pop.members[i].fitness.expect("population is evaluated");
    let best_entropy = front.iter().map(|&i| fit(i).entropy()).fold(f64::MIN, f64::max);
    let best_f2 = front.iter().map(|&i| fit(i).f2).fold(f64::MAX, f64::min);
    let mean_f2 =
        (0..pop.members.len()).map(|i| fit(i).f2).sum::<f64>() / pop.members.len() as f64;
    GenerationStats {
        generation: pop.generation,
        best_entropy,
        best_f2,
        mean_f2,
        mutation_rate: rate,
        front_size: front.len(),
    }
}

/// Runs the full search against an arbitrary objective.
pub fn evolve_objective<O: Objective + ?Sized>(
    objective: &O,
    bounds: &ParamBounds,
    cfg: &EvolutionConfig,
) -> Result<EvolutionResult> {
    bounds.validate()?;
    cfg.validate()?;
    let n = cfg.pop_size;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut pop = init_population(bounds, cfg, &mut rng);
    let mut evaluations = evaluate_missing(objective, &mut pop.members)?;
    let mut fronts = assign_rank_and_crowding(&mut pop)?;
    let mut history = Vec::with_capacity(cfg.generations);

    for g in 1..=cfg.generations {
        let rate = adaptive_mutation_rate(&pop, cfg.base_mutation_rate(g), cfg.diversity_threshold);

        let mut offspring = Vec::with_capacity(n);
        while offspring.len() < n {
            let a = pop.members[tournament_select(&pop, &mut rng)?].params;
            let b = pop.members[tournament_select(&pop, &mut rng)?].params;
            let (c1, c2) = if rng.random::<f64>() < cfg.crossover_prob {
                blend_crossover(&a, &b, cfg.blend_alpha, bounds, &mut rng)
            } else {
                (a, b)
            };
            for child in [c1, c2] {
                let mutated = gaussian_mutate(&child, cfg, bounds, rate, &mut rng);
                if offspring.len() < n {
                    offspring.push(Individual::new(mutated));
                }
            }
        }
        evaluations += evaluate_missing(objective, &mut offspring)?;

        let mut combined = std::mem::take(&mut pop.members);
        combined.extend(offspring);
        pop = Population {
            members: select_survivors(combined, n)?,
            generation: g,
        };
        fronts = assign_rank_and_crowding(&mut pop)?;

        if cfg.local_search_steps > 0 {
            let targets: Vec<usize> = ranked_order(&pop)
                .into_iter()
                .take(cfg.local_search_count())
                .collect();
            let seeds: Vec<u64> = targets.iter().map(|_| rng.random()).collect();
            let refined: Vec<Result<Individual>> = targets
                .par_iter()
                .zip(seeds)
                .map(|(&i, seed)| {
                    let mut local = ChaCha8Rng::seed_from_u64(seed);
                    local_search(
                        &pop.members[i],
                        cfg.local_search_steps,
                        cfg.local_search_sigma_fraction,
                        bounds,
                        objective,
                        &mut local,
                    )
                })
                .collect();
            for (&i, r) in targets.iter().zip(refined) {
                pop.members[i] = r?;
            }
            evaluations += targets.len() * cfg.local_search_steps;
            fronts = assign_rank_and_crowding(&mut pop)?;
        }

        history.push(generation_stats(&pop, &fronts[0], rate));
    }

    let front: Vec<Individual> = fronts[0].iter().map(|&i| pop.members[i].clone()).collect();
    let best = select_representative(&front)?;
    Ok(EvolutionResult {
        best,
        front,
        history,
        population: pop,
        evaluations,
    })
}

/// Searches enhancement parameters for one image.
pub fn evolve(
    original: &ImageBuffer,
    extractor: &dyn FeatureExtractor,
    bounds: &ParamBounds,
    penalty: &PenaltyConfig,
    cfg: &EvolutionConfig,
) -> Result<EvolutionResult> {
    let objective = ImageObjective::new(original, extractor, *penalty, *bounds)?;
    evolve_objective(&objective, bounds, cfg)
}
