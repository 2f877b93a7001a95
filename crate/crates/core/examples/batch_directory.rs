//! Enhance a whole directory through the library API, the same path the
//! `enhance` binary takes.
//!
//! ```text
//! cargo run --release --example batch_directory -- in_dir out_dir
//! ```
//! Without arguments a few synthetic scenes are generated into a temporary
//! input folder first.

use std::path::PathBuf;

use nsga_enhance::batch::{run_batch, RunConfig};
use nsga_enhance::image_core::save_image;
use nsga_enhance::synthetic::low_light_scene;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<PathBuf> = std::env::args().skip(1).map(PathBuf::from).collect();
    let (input, output) = match args.as_slice() {
        [i, o, ..] => (i.clone(), o.clone()),
        _ => {
            let root = std::env::temp_dir().join("nsga-enhance-demo");
            let input = root.join("in");
            std::fs::create_dir_all(input.join("night"))?;
            for seed in 0..4 {
                let rel = if seed % 2 == 0 { format!("scene{seed}.png") } else { format!("night/scene{seed}.png") };
                save_image(&low_light_scene(96, 72, 0.3, seed), input.join(rel))?;
            }
            (input, root.join("out"))
        }
    };

    let cfg = RunConfig {
        input_dir: input,
        output_dir: output.clone(),
        workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
        seed: 7,
        trace: true,
        ..Default::default()
    };
    let summary = run_batch(&cfg)?;
    for r in &summary.reports {
        println!(
            "{:20} H {:.3} -> {:.3}  mean {:.3} -> {:.3}  b {:.1} c {:.2} gamma {:.2}",
            r.image_id, r.entropy_before, r.entropy_after, r.brightness_before, r.brightness_after,
            r.params.b, r.params.c, r.params.gamma
        );
    }
    for (id, err) in &summary.failures {
        println!("failed {id}: {err}");
    }
    println!("reports in {}", output.display());
    std::process::exit(summary.exit_code());
}
