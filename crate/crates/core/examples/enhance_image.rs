//! Apply a fixed brightness/contrast/gamma triple to an image.
//!
//! ```text
//! cargo run --example enhance_image -- input.png output.png 20 1.4 1.2
//! ```
//! Without arguments a synthetic dark scene is written to `enhanced.png`.

use std::env;

use nsga_enhance::enhance::enhance;
use nsga_enhance::image_core::{image_entropy, load_image, mean_brightness, save_image};
use nsga_enhance::synthetic::low_light_scene;
use nsga_enhance::{EnhanceParams, ParamBounds};

fn main() -> nsga_enhance::Result<()> {
    let args: Vec<String> = env::args().skip(1).collect();
    let (img, out) = match args.as_slice() {
        [input, output, ..] => (load_image(input)?, output.clone()),
        _ => (low_light_scene(128, 96, 0.3, 7), "enhanced.png".to_string()),
    };
    let num = |i: usize, default: f64| args.get(i).and_then(|s| s.parse().ok()).unwrap_or(default);
    let params = EnhanceParams::new(num(2, 25.0), num(3, 1.3), num(4, 1.4));
    ParamBounds::default().check(&params)?;

    let result = enhance(&img, &params)?;
    save_image(&result, &out)?;
    println!("{params:?}");
    println!("entropy    {:.3} -> {:.3}", image_entropy(&img), image_entropy(&result));
    println!("brightness {:.3} -> {:.3}", mean_brightness(&img), mean_brightness(&result));
    println!("wrote {out}");
    Ok(())
}
