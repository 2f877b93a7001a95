//! Search enhancement parameters for one image and inspect the Pareto front.
//!
//! ```text
//! cargo run --release --example optimize_single -- dark.png out.png
//! ```

use nsga_enhance::enhance::enhance;
use nsga_enhance::features::FallbackExtractor;
use nsga_enhance::image_core::{image_entropy, load_image, mean_brightness, save_image};
use nsga_enhance::moea::evolve;
use nsga_enhance::synthetic::low_light_scene;
use nsga_enhance::{EvolutionConfig, ParamBounds, PenaltyConfig};

fn main() -> nsga_enhance::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let img = match args.first() {
        Some(path) => load_image(path)?,
        None => low_light_scene(96, 96, 0.3, 42),
    };
    let cfg = EvolutionConfig { seed: 42, ..Default::default() };
    let result = evolve(&img, &FallbackExtractor, &ParamBounds::default(), &PenaltyConfig::default(), &cfg)?;

    println!("gen  best H   best f2   mean f2   p_mut  |front|");
    for g in &result.history {
        println!(
            "{:3}  {:7.4}  {:8.4}  {:8.4}  {:5.3}  {}",
            g.generation, g.best_entropy, g.best_f2, g.mean_f2, g.mutation_rate, g.front_size
        );
    }
    let mut front = result.front.clone();
    front.sort_by(|a, b| a.fitness.unwrap().f1.total_cmp(&b.fitness.unwrap().f1));
    println!("\nfinal front ({} members, {} evaluations):", front.len(), result.evaluations);
    for m in &front {
        let p = m.params;
        let f = m.fitness.unwrap();
        println!("  b {:6.2}  c {:.3}  gamma {:.3}  H {:.4}  f2 {:.4}", p.b, p.c, p.gamma, -f.f1, f.f2);
    }

    let out = enhance(&img, &result.best.params)?;
    println!("\nchosen {:?}", result.best.params);
    println!("entropy {:.3} -> {:.3}, brightness {:.3} -> {:.3}",
        image_entropy(&img), image_entropy(&out), mean_brightness(&img), mean_brightness(&out));
    save_image(&out, args.get(1).map_or("optimized.png", String::as_str))?;
    Ok(())
}
