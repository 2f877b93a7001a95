//! Feature vectors and distances from the ONNX trunk or the fallback.
//!
//! ```text
//! cargo run --example deep_features -- vgg16_trunk.onnx a.png b.png
//! cargo run --example deep_features                # fallback features
//! ```
//! The tiny test trunk also works: pass
//! `crates/core/tests/fixtures/tiny_trunk.onnx` with `INPUT_SIZE=32 POOLED_DIM=16`.

use nsga_enhance::enhance::enhance;
use nsga_enhance::features::{build_extractor, feature_distance};
use nsga_enhance::image_core::load_image;
use nsga_enhance::synthetic::low_light_scene;
use nsga_enhance::{EnhanceParams, ExtractorSpec};

fn env_usize(key: &str) -> Option<usize> {
    std::env::var(key).ok()?.parse().ok()
}

fn main() -> nsga_enhance::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let spec = match args.first() {
        Some(model) => {
            let mut spec = ExtractorSpec::deep(model);
            spec.input_size = env_usize("INPUT_SIZE").unwrap_or(spec.input_size);
            spec.pooled_dim = env_usize("POOLED_DIM").unwrap_or(spec.pooled_dim);
            spec
        }
        None => ExtractorSpec::fallback(),
    };
    let extractor = build_extractor(&spec)?;
    let a = match args.get(1) {
        Some(p) => load_image(p)?,
        None => low_light_scene(64, 64, 0.3, 3),
    };
    let b = match args.get(2) {
        Some(p) => load_image(p)?,
        None => enhance(&a, &EnhanceParams::new(30.0, 1.5, 1.3))?,
    };

    let (fa, fb) = (extractor.extract(&a)?, extractor.extract(&b)?);
    println!("extractor {} ({} dims)", extractor.id(), extractor.dim());
    println!("first values of a: {:?}", &fa.values[..fa.len().min(6)]);
    println!("distance(a, a) = {}", feature_distance(&fa, &fa)?);
    println!("distance(a, b) = {:.6}", feature_distance(&fa, &fb)?);
    Ok(())
}
