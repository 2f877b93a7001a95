//! Initialization, parent selection and variation operators.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::enhance::{clip_params, EnhanceParams, ParamBounds};
use crate::error::{Error, Result};
use crate::moea::{EvolutionConfig, Individual, Population};

/// `N` members: slot 0 is the identity `[0, 1, 1]` clipped into `bounds`, the
/// rest are uniform in the bound box.
pub fn init_population<R: Rng + ?Sized>(
    bounds: &ParamBounds,
    cfg: &EvolutionConfig,
    rng: &mut R,
) -> Population {
    let (lo, range) = (bounds.lower(), bounds.ranges());
    let mut members = Vec::with_capacity(cfg.pop_size);
    members.push(Individual::new(clip_params(&EnhanceParams::IDENTITY, bounds)));
    while members.len() < cfg.pop_size {
        let genes = std::array::from_fn(|k| lo[k] + rng.random::<f64>() * range[k]);
        members.push(Individual::new(clip_params(&EnhanceParams::from_genes(genes), bounds)));
    }
    Population {
        members,
        generation: 0,
    }
}

/// `a` beats `b` on lower rank, then on larger crowding distance.
fn compare(a: &Individual, b: &Individual) -> Result<std::cmp::Ordering> {
    let key = |m: &Individual| match (m.rank, m.crowding) {
        (Some(r), Some(c)) => Ok((r, c)),
        _ => Err(Error::Unsorted),
    };
    let (ra, ca) = key(a)?;
    let (rb, cb) = key(b)?;
    Ok(rb.cmp(&ra).then(ca.total_cmp(&cb)))
}

/// Binary tournament: two uniform draws, the better by (rank, crowding) wins,
/// full ties are settled by a fair coin.
pub fn tournament_select<R: Rng + ?Sized>(pop: &Population, rng: &mut R) -> Result<usize> {
    let n = pop.members.len();
    if n == 0 {
        return Err(Error::EmptyFront);
    }
    let a = rng.random_range(0..n);
    let b = rng.random_range(0..n);
    Ok(match compare(&pop.members[a], &pop.members[b])? {
        std::cmp::Ordering::Greater => a,
        std::cmp::Ordering::Less => b,
        std::cmp::Ordering::Equal => {
            if rng.random_bool(0.5) {
                a
            } else {
                b
            }
        }
    })
}

/// BLX-alpha: each child gene is uniform on `[min - alpha*d, max + alpha*d]`
/// with `d = |p1 - p2|`, then clipped into `bounds`.
pub fn blend_crossover<R: Rng + ?Sized>(
    p1: &EnhanceParams,
    p2: &EnhanceParams,
    alpha: f64,
    bounds: &ParamBounds,
    rng: &mut R,
) -> (EnhanceParams, EnhanceParams) {
    let (g1, g2) = (p1.genes(), p2.genes());
    let mut c1 = [0.0; 3];
    let mut c2 = [0.0; 3];
    for k in 0..3 {
        let (lo, hi) = (g1[k].min(g2[k]), g1[k].max(g2[k]));
        let d = hi - lo;
        let (start, width) = (lo - alpha * d, d * (1.0 + 2.0 * alpha));
        c1[k] = start + rng.random::<f64>() * width;
        c2[k] = start + rng.random::<f64>() * width;
    }
    (
        clip_params(&EnhanceParams::from_genes(c1), bounds),
        clip_params(&EnhanceParams::from_genes(c2), bounds),
    )
}

/// With probability `rate` per gene, adds `N(0, (sigma_fraction * range)^2)`,
/// then clips.
pub fn gaussian_mutate<R: Rng + ?Sized>(
    e: &EnhanceParams,
    cfg: &EvolutionConfig,
    bounds: &ParamBounds,
    rate: f64,
    rng: &mut R,
) -> EnhanceParams {
    let ranges = bounds.ranges();
    let mut genes = e.genes();
    for k in 0..3 {
        if rng.random::<f64>() < rate {
            let z: f64 = rng.sample(StandardNormal);
            genes[k] += z * cfg.mutation_sigma_fraction * ranges[k];
        }
    }
    clip_params(&EnhanceParams::from_genes(genes), bounds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fitness::FitnessPair;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ranked(rank: usize, crowding: f64) -> Individual {
        let mut m = Individual::evaluated(EnhanceParams::IDENTITY, FitnessPair::new(0.0, 0.0));
        m.rank = Some(rank);
        m.crowding = Some(crowding);
        m
    }

    #[test]
    fn init_population_contract() {
        let bounds = ParamBounds::default();
        let cfg = EvolutionConfig::default();
        let pop = init_population(&bounds, &cfg, &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(pop.members.len(), 50);
        assert_eq!(pop.members[0].params, EnhanceParams::IDENTITY);
        assert!(pop.members.iter().all(|m| bounds.contains(&m.params)));
        let again = init_population(&bounds, &cfg, &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(pop, again);
    }

    #[test]
    fn identity_is_clipped_into_shifted_bounds() {
        let bounds = ParamBounds { b_lo: 5.0, c_lo: 1.2, ..Default::default() };
        let pop = init_population(&bounds, &EvolutionConfig::default(), &mut ChaCha8Rng::seed_from_u64(0));
        assert_eq!(pop.members[0].params, EnhanceParams::new(5.0, 1.2, 1.0));
    }

    #[test]
    fn tournament_prefers_rank_then_crowding() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let pop = Population { members: vec![ranked(0, 0.1), ranked(1, f64::INFINITY)], generation: 0 };
        // Member 1 only wins when both draws land on it: P(0 wins) = 3/4.
        let wins = (0..2000).filter(|_| tournament_select(&pop, &mut rng).unwrap() == 0).count();
        assert!((wins as f64 / 2000.0 - 0.75).abs() < 0.05);
        let pop = Population { members: vec![ranked(0, 0.3), ranked(0, f64::INFINITY)], generation: 0 };
        let wins = (0..2000).filter(|_| tournament_select(&pop, &mut rng).unwrap() == 1).count();
        // Member 1 wins unless both draws hit member 0: P = 3/4.
        assert!((wins as f64 / 2000.0 - 0.75).abs() < 0.05);
    }

    #[test]
    fn tournament_tie_is_a_coin_flip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let pop = Population { members: vec![ranked(2, 0.5), ranked(2, 0.5)], generation: 0 };
        let zeros = (0..4000).filter(|_| tournament_select(&pop, &mut rng).unwrap() == 0).count();
        assert!((zeros as f64 / 4000.0 - 0.5).abs() < 0.04);
    }

    #[test]
    fn tournament_needs_sorted_population() {
        let pop = Population {
            members: vec![Individual::evaluated(EnhanceParams::IDENTITY, FitnessPair::new(0.0, 0.0))],
            generation: 0,
        };
        assert!(matches!(
            tournament_select(&pop, &mut ChaCha8Rng::seed_from_u64(0)),
            Err(Error::Unsorted)
        ));
    }

    #[test]
    fn blend_of_equal_parents_is_the_parent() {
        let p = EnhanceParams::new(12.5, 1.3, 1.7);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (a, b) = blend_crossover(&p, &p, 0.5, &ParamBounds::default(), &mut rng);
        assert_eq!((a, b), (p, p));
    }

    #[test]
    fn blend_interval_extends_by_alpha() {
        let wide = ParamBounds { b_lo: -5.0, b_hi: 5.0, c_lo: 0.1, c_hi: 5.0, g_lo: 0.1, g_hi: 5.0 };
        let p1 = EnhanceParams::new(0.0, 1.0, 1.0);
        let p2 = EnhanceParams::new(1.0, 2.0, 2.0);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (mut min, mut max) = (f64::MAX, f64::MIN);
        for _ in 0..5000 {
            let (a, b) = blend_crossover(&p1, &p2, 0.5, &wide, &mut rng);
            for v in [a.b, b.b] {
                assert!((-0.5..=1.5).contains(&v));
                min = min.min(v);
                max = max.max(v);
            }
        }
        assert!(min < -0.45 && max > 1.45);
    }

    #[test]
    fn mutation_rate_zero_is_identity() {
        let e = EnhanceParams::new(3.0, 1.5, 1.5);
        let cfg = EvolutionConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        assert_eq!(gaussian_mutate(&e, &cfg, &ParamBounds::default(), 0.0, &mut rng), e);
    }

    #[test]
    fn mutation_sigma_follows_gene_range() {
        // Default b range is 70; starting mid-range keeps clipping 5 sigma away.
        let bounds = ParamBounds::default();
        let cfg = EvolutionConfig::default();
        let e = EnhanceParams::new(25.0, 1.5, 1.5);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let n = 20000;
        let samples: Vec<f64> = (0..n)
            .map(|_| gaussian_mutate(&e, &cfg, &bounds, 1.0, &mut rng).b)
            .collect();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let sd = (samples.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64).sqrt();
        assert!((sd - 7.0).abs() < 0.15, "sd = {sd}");
    }
}
