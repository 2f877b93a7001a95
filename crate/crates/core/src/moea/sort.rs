//! Non-dominated sorting, crowding distance and elitist truncation.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::fitness::{dominates, FitnessPair};
use crate::moea::{Individual, Population};

/// Fast non-dominated sort over raw fitness values.
///
/// Front 0 holds the members dominated by nobody; front `k` holds the members
/// dominated only by members of earlier fronts. Indices within a front are
/// ascending.
pub fn sort_fitness(fitness: &[FitnessPair]) -> Vec<Vec<usize>> {
    let n = fitness.len();
    let mut dominated_by_count = vec![0usize; n];
    let mut dominates_set: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            if dominates(&fitness[i], &fitness[j]) {
                dominates_set[i].push(j);
                dominated_by_count[j] += 1;
            } else if dominates(&fitness[j], &fitness[i]) {
                dominates_set[j].push(i);
                dominated_by_count[i] += 1;
            }
        }
    }

    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| dominated_by_count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominates_set[i] {
                dominated_by_count[j] -= 1;
                if dominated_by_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current);
        current = next;
    }
    fronts
}

pub(crate) fn fitness_of(members: &[Individual]) -> Result<Vec<FitnessPair>> {
    members
        .iter()
        .enumerate()
        .map(|(i, m)| m.fitness.ok_or(Error::MissingFitness(i)))
        .collect()
}

/// Partitions the population into fronts and stores each member's rank.
pub fn nondominated_sort(pop: &mut Population) -> Result<Vec<Vec<usize>>> {
    let fitness = fitness_of(&pop.members)?;
    let fronts = sort_fitness(&fitness);
    for (rank, front) in fronts.iter().enumerate() {
        for &i in front {
            pop.members[i].rank = Some(rank);
        }
    }
    Ok(fronts)
}

/// Crowding distance of each member of `front`, in the order of `front`.
///
/// Per objective the front is sorted; the two extremes get `+inf` and every
/// interior member accumulates `(next - prev) / (max - min)`. An objective
/// with zero range contributes nothing.
pub fn crowding_distances(front: &[usize], fitness: &[FitnessPair]) -> Vec<f64> {
    let n = front.len();
    let mut dist = vec![0.0; n];
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let objectives: [fn(&FitnessPair) -> f64; 2] = [|f| f.f1, |f| f.f2];
    for value in objectives {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            value(&fitness[front[a]])
                .total_cmp(&value(&fitness[front[b]]))
                .then(front[a].cmp(&front[b]))
        });
        let lo = value(&fitness[front[order[0]]]);
        let hi = value(&fitness[front[order[n - 1]]]);
        dist[order[0]] = f64::INFINITY;
        dist[order[n - 1]] = f64::INFINITY;
        let range = hi - lo;
        if range <= 0.0 {
            continue;
        }
        for k in 1..n - 1 {
            let prev = value(&fitness[front[order[k - 1]]]);
            let next = value(&fitness[front[order[k + 1]]]);
            dist[order[k]] += (next - prev) / range;
        }
    }
    dist
}

pub fn crowding_distance(front: &[usize], pop: &Population) -> Result<Vec<f64>> {
    Ok(crowding_distances(front, &fitness_of(&pop.members)?))
}

/// Sorts the population and fills in every member's rank and crowding.
pub fn assign_rank_and_crowding(pop: &mut Population) -> Result<Vec<Vec<usize>>> {
    let fronts = nondominated_sort(pop)?;
    let fitness = fitness_of(&pop.members)?;
    for front in &fronts {
        for (&i, d) in front.iter().zip(crowding_distances(front, &fitness)) {
            pop.members[i].crowding = Some(d);
        }
    }
    Ok(fronts)
}

/// Ordering of front members for truncation: larger crowding first, then
/// lexicographically smaller `(f1, f2)`, then lower index.
fn truncation_order(a: (usize, f64), b: (usize, f64), fitness: &[FitnessPair]) -> Ordering {
    b.1.total_cmp(&a.1)
        .then(fitness[a.0].f1.total_cmp(&fitness[b.0].f1))
        .then(fitness[a.0].f2.total_cmp(&fitness[b.0].f2))
        .then(a.0.cmp(&b.0))
}

/// Elitist replacement: keeps `n` members by front, then crowding within the
/// front that overflows. Survivors are returned front by front.
pub fn select_survivors(members: Vec<Individual>, n: usize) -> Result<Vec<Individual>> {
    let fitness = fitness_of(&members)?;
    let fronts = sort_fitness(&fitness);
    let mut keep = Vec::with_capacity(n);
    for front in fronts {
        if keep.len() == n {
            break;
        }
        if keep.len() + front.len() <= n {
            keep.extend(front);
            continue;
        }
        let dist = crowding_distances(&front, &fitness);
        let mut scored: Vec<(usize, f64)> = front.into_iter().zip(dist).collect();
        scored.sort_by(|&a, &b| truncation_order(a, b, &fitness));
        let room = n - keep.len();
        keep.extend(scored.into_iter().take(room).map(|(i, _)| i));
    }
    let mut slots: Vec<Option<Individual>> = members.into_iter().map(Some).collect();
    Ok(keep
        .into_iter()
        .map(|i| {
            let mut ind = slots[i].take().expect("each index is kept once");
            ind.rank = None;
            ind.crowding = None;
            ind
        })
        .collect())
}
