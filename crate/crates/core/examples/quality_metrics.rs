//! PSNR and SSIM between an image and a reference.
//!
//! ```text
//! cargo run --example quality_metrics -- enhanced.png expert.png
//! ```

use nsga_enhance::enhance::enhance;
use nsga_enhance::image_core::load_image;
use nsga_enhance::metrics::{psnr, ssim, Psnr};
use nsga_enhance::synthetic::low_light_scene;
use nsga_enhance::EnhanceParams;

fn main() -> nsga_enhance::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let pairs = if let [a, b, ..] = args.as_slice() {
        vec![("given pair".to_string(), load_image(a)?, load_image(b)?)]
    } else {
        let reference = low_light_scene(80, 60, 0.9, 5);
        let dark = enhance(&reference, &EnhanceParams::new(-10.0, 1.0, 1.0))?;
        let noisy = low_light_scene(80, 60, 0.9, 6);
        vec![
            ("identical".to_string(), reference.clone(), reference.clone()),
            ("darkened".to_string(), dark, reference.clone()),
            ("other scene".to_string(), noisy, reference),
        ]
    };
    for (name, x, reference) in pairs {
        let p = match Psnr::from(psnr(&x, &reference)?) {
            Psnr::Db(db) => format!("{db:.2} dB"),
            Psnr::Identical => "identical".into(),
        };
        println!("{name:12} PSNR {p:>10}  SSIM {:.4}", ssim(&x, &reference)?);
    }
    Ok(())
}
