//! Batch low-light enhancement.
//!
//! Exit codes: 0 when every image succeeded, 2 when some images failed,
//! 1 on configuration errors.
//!
//! With `--model`, the file must be an ONNX convolutional trunk whose first
//! input is `1x3xSxS` (ImageNet-normalized RGB, `S = --input-size`, default
//! 224) and whose first output is `1xC` or a `1xCxhxw` feature map
//! (`C = --pooled-dim`, default 512).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use nsga_enhance::batch::{run_batch, RunConfig};
use nsga_enhance::features::{ExtractorKind, ExtractorSpec};

#[derive(Debug, Parser)]
#[command(name = "enhance", version, about = "Enhance a directory of low-light images")]
struct Args {
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Reference images for PSNR/SSIM, matched by relative path.
    #[arg(long)]
    reference: Option<PathBuf>,
    /// TOML configuration; command-line flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// ONNX feature trunk.
    #[arg(long, conflicts_with = "fallback_features")]
    model: Option<PathBuf>,
    /// Use the built-in model-free features.
    #[arg(long)]
    fallback_features: bool,
    #[arg(long)]
    input_size: Option<usize>,
    #[arg(long)]
    pooled_dim: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    /// Write per-generation records to trace.jsonl.
    #[arg(long)]
    trace: bool,
    /// Write runtime_ms = 0 so reports are reproducible byte for byte.
    #[arg(long)]
    no_timing: bool,
}

fn build_config(args: Args) -> Result<RunConfig, String> {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::from_toml_file(path).map_err(|e| e.to_string())?,
        None => RunConfig::default(),
    };
    if let Some(v) = args.input {
        cfg.input_dir = v;
    }
    if let Some(v) = args.output {
        cfg.output_dir = v;
    }
    if args.reference.is_some() {
        cfg.reference_dir = args.reference;
    }
    if let Some(path) = args.model {
        cfg.extractor = ExtractorSpec {
            kind: ExtractorKind::DeepModel,
            model_path: Some(path),
            ..ExtractorSpec::deep("")
        };
    } else if args.fallback_features {
        cfg.extractor = ExtractorSpec::fallback();
    }
    if let Some(v) = args.input_size {
        cfg.extractor.input_size = v;
    }
    if let Some(v) = args.pooled_dim {
        cfg.extractor.pooled_dim = v;
    }
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if let Some(v) = args.workers {
        cfg.workers = v;
    }
    cfg.trace |= args.trace;
    if args.no_timing {
        cfg.record_runtime = false;
    }
    if cfg.input_dir.as_os_str().is_empty() {
        return Err("--input is required (flag or config file)".into());
    }
    if cfg.output_dir.as_os_str().is_empty() {
        return Err("--output is required (flag or config file)".into());
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    // Usage errors exit 1 as well; clap's default of 2 means partial failure here.
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let cfg = match build_config(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let summary = match run_batch(&cfg) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    println!(
        "processed {}/{} images in {} ms",
        summary.images_processed, summary.discovered, summary.wall_time_ms
    );
    println!(
        "mean entropy {:.4} -> {:.4}, mean brightness {:.4} -> {:.4}",
        summary.means.entropy_before,
        summary.means.entropy_after,
        summary.means.brightness_before,
        summary.means.brightness_after
    );
    for (id, err) in &summary.failures {
        eprintln!("failed {id}: {err}");
    }
    ExitCode::from(summary.exit_code() as u8)
}
