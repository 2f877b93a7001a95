//! Non-dominated sorting and crowding distance on a hand-made population.

use nsga_enhance::moea::{assign_rank_and_crowding, select_survivors};
use nsga_enhance::{EnhanceParams, FitnessPair, Individual, Population};

fn main() -> nsga_enhance::Result<()> {
    let points = [
        (-6.0, 0.9),
        (-5.5, 0.5),
        (-5.0, 0.2),
        (-4.0, 0.1),
        (-5.0, 0.8),
        (-4.5, 0.4),
        (-3.0, 0.9),
    ];
    let mut pop = Population {
        members: points
            .iter()
            .map(|&(f1, f2)| Individual::evaluated(EnhanceParams::IDENTITY, FitnessPair::new(f1, f2)))
            .collect(),
        generation: 0,
    };
    let fronts = assign_rank_and_crowding(&mut pop)?;
    for (rank, front) in fronts.iter().enumerate() {
        println!("front {rank}:");
        for &i in front {
            let m = &pop.members[i];
            println!("  #{i} f = {:?} crowding {:.3}", points[i], m.crowding.unwrap());
        }
    }

    let kept = select_survivors(pop.members, 4)?;
    let kept: Vec<_> = kept.iter().map(|m| m.fitness.unwrap()).map(|f| (f.f1, f.f2)).collect();
    println!("best 4 survivors: {kept:?}");
    Ok(())
}
