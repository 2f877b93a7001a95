//! Luma histogram, entropy and brightness of an image.
//!
//! ```text
//! cargo run --example image_statistics -- photo.jpg
//! ```

use nsga_enhance::image_core::{histogram256, load_image, mean_brightness, shannon_entropy, to_grayscale};
use nsga_enhance::synthetic::low_light_scene;

fn main() -> nsga_enhance::Result<()> {
    let img = match std::env::args().nth(1) {
        Some(path) => load_image(path)?,
        None => low_light_scene(64, 64, 0.3, 1),
    };
    let hist = histogram256(&to_grayscale(&img));
    println!("{}x{} pixels", img.width(), img.height());
    println!("entropy         {:.4} bits", shannon_entropy(&hist)?);
    println!("mean brightness {:.4}", mean_brightness(&img));

    // A coarse 16-bucket view of the 256-level histogram.
    let peak = hist.bins.chunks(16).map(|c| c.iter().sum::<u64>()).max().unwrap_or(1).max(1);
    for (i, chunk) in hist.bins.chunks(16).enumerate() {
        let n: u64 = chunk.iter().sum();
        println!("{:3}-{:3} {}", i * 16, i * 16 + 15, "#".repeat((n * 50 / peak) as usize));
    }
    Ok(())
}
