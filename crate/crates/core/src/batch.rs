//! Directory-level batch runs.
//!
//! Every supported image under `input_dir` is enhanced independently and
//! written to the same relative path under `output_dir`, alongside
//! `report.csv`, `report.json` and, optionally, `trace.jsonl`.
//!
//! Each image gets its own seed, `seed XOR fnv1a64(image_id)`, where the id
//! is the `/`-separated path relative to `input_dir`. Results therefore do
//! not depend on the worker count or on other files in the tree.
//!
//! Configuration files are TOML; every key is optional:
//!
//! ```toml
//! input_dir = "data/low"
//! output_dir = "out"
//! reference_dir = "data/expert"   # paired metrics, matched by relative path
//! workers = 4
//! seed = 42
//! trace = true
//! record_runtime = true           # false writes runtime_ms = 0
//!
//! [extractor]
//! kind = "deep-model"             # or "fallback"
//! model_path = "vgg16_trunk.onnx"
//! input_size = 224
//! pooled_dim = 512
//! pooling = "average"             # or "max"
//!
//! [bounds]
//! b_lo = -10.0
//! b_hi = 60.0
//! c_lo = 1.0
//! c_hi = 2.0
//! g_lo = 1.0
//! g_hi = 2.0
//!
//! [penalty]
//! lo = 0.35
//! hi = 0.7
//! lambda = 30.0
//!
//! [evolution]
//! pop_size = 50
//! generations = 5
//! crossover_prob = 0.85
//! mutation_prob_start = 0.3
//! mutation_prob_end = 0.2
//! local_search_steps = 8
//! local_search_fraction = 0.1
//! local_search_sigma_fraction = 0.02
//! blend_alpha = 0.5
//! mutation_sigma_fraction = 0.1
//! diversity_threshold = 5.0
//! ```
//!
//! `evolution.seed` is ignored by batch runs; the per-image seed above
//! replaces it.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enhance::{enhance, ParamBounds};
use crate::error::{Error, Result};
use crate::features::{build_extractor, ExtractorSpec, FeatureExtractor};
use crate::fitness::PenaltyConfig;
use crate::image_core::{image_entropy, load_image, mean_brightness, save_image};
use crate::metrics::{psnr, reports_to_csv, reports_to_json, ssim, MetricsReport, Psnr};
use crate::moea::{evolve, EvolutionConfig, GenerationStats};

pub const SUPPORTED_EXTENSIONS: [&str; 4] = ["png", "jpg", "jpeg", "bmp"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub input_dir: PathBuf,
    pub output_dir: PathBuf,
    pub reference_dir: Option<PathBuf>,
    pub extractor: ExtractorSpec,
    pub bounds: ParamBounds,
    pub penalty: PenaltyConfig,
    pub evolution: EvolutionConfig,
    pub workers: usize,
    pub seed: u64,
    pub trace: bool,
    pub record_runtime: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            input_dir: PathBuf::new(),
            output_dir: PathBuf::new(),
            reference_dir: None,
            extractor: ExtractorSpec::default(),
            bounds: ParamBounds::default(),
            penalty: PenaltyConfig::default(),
            evolution: EvolutionConfig::default(),
            workers: 1,
            seed: 0,
            trace: false,
            record_runtime: true,
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_toml_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.input_dir.is_dir() {
            return Err(Error::Config(format!(
                "input directory {} does not exist",
                self.input_dir.display()
            )));
        }
        if self.output_dir.as_os_str().is_empty() {
            return Err(Error::Config("output directory is required".into()));
        }
        if let Some(r) = &self.reference_dir {
            if !r.is_dir() {
                return Err(Error::Config(format!(
                    "reference directory {} does not exist",
                    r.display()
                )));
            }
        }
        if self.workers == 0 {
            return Err(Error::Config("workers must be >= 1".into()));
        }
        self.extractor.validate()?;
        self.bounds.validate()?;
        self.penalty.validate()?;
        self.evolution.validate()
    }
}

/// 64-bit FNV-1a.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

pub fn image_seed(seed: u64, image_id: &str) -> u64 {
    seed ^ fnv1a64(image_id.as_bytes())
}

/// `/`-separated relative path used as the image id.
pub fn image_id(relative: &Path) -> String {
    relative
        .components()
        .map(|c| c.as_os_str().to_string_lossy())
        .collect::<Vec<_>>()
        .join("/")
}

fn is_supported(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| SUPPORTED_EXTENSIONS.contains(&e.to_ascii_lowercase().as_str()))
}

/// Supported images under `input_dir`, as paths relative to it, sorted by id.
pub fn discover_inputs(input_dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let root = input_dir.as_ref();
    let mut found = Vec::new();
    for entry in walkdir::WalkDir::new(root).follow_links(true) {
        let entry = entry.map_err(|e| {
            let path = e.path().unwrap_or(root).to_path_buf();
            Error::io(path, e.into())
        })?;
        if entry.file_type().is_file() && is_supported(entry.path()) {
            let rel = entry
                .path()
                .strip_prefix(root)
                .expect("walkdir yields paths under its root")
                .to_path_buf();
            found.push(rel);
        }
    }
    found.sort_by_cached_key(|p| image_id(p));
    Ok(found)
}

/// One line of `trace.jsonl`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub image_id: String,
    #[serde(flatten)]
    pub stats: GenerationStats,
}

/// Means over the processed images.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ReportMeans {
    pub entropy_before: f64,
    pub entropy_after: f64,
    pub brightness_before: f64,
    pub brightness_after: f64,
    pub b: f64,
    pub c: f64,
    pub gamma: f64,
    /// Over finite PSNR values only.
    pub psnr: Option<f64>,
    pub ssim: Option<f64>,
    pub runtime_ms: f64,
}

impl ReportMeans {
    pub fn from_reports(reports: &[MetricsReport]) -> Self {
        fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
            let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
            (n > 0).then(|| sum / n as f64)
        }
        let all = |f: fn(&MetricsReport) -> f64| mean(reports.iter().map(f)).unwrap_or(0.0);
        Self {
            entropy_before: all(|r| r.entropy_before),
            entropy_after: all(|r| r.entropy_after),
            brightness_before: all(|r| r.brightness_before),
            brightness_after: all(|r| r.brightness_after),
            b: all(|r| r.params.b),
            c: all(|r| r.params.c),
            gamma: all(|r| r.params.gamma),
            psnr: mean(reports.iter().filter_map(|r| match r.psnr {
                Some(Psnr::Db(v)) => Some(v),
                _ => None,
            })),
            ssim: mean(reports.iter().filter_map(|r| r.ssim)),
            runtime_ms: all(|r| r.runtime_ms as f64),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub discovered: usize,
    pub images_processed: usize,
    /// `(image_id, error message)`.
    pub failures: Vec<(String, String)>,
    pub means: ReportMeans,
    pub wall_time_ms: u64,
    pub reports: Vec<MetricsReport>,
}

impl RunSummary {
    /// 0 when every image succeeded, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.failures.is_empty() {
            0
        } else {
            2
        }
    }
}

struct Outcome {
    report: MetricsReport,
    trace: Vec<GenerationStats>,
}

fn process_image(
    rel: &Path,
    id: &str,
    cfg: &RunConfig,
    extractor: &dyn FeatureExtractor,
) -> Result<Outcome> {
    let start = Instant::now();
    let original = load_image(cfg.input_dir.join(rel))?;
    let evolution = EvolutionConfig {
        seed: image_seed(cfg.seed, id),
        ..cfg.evolution.clone()
    };
    let result = evolve(&original, extractor, &cfg.bounds, &cfg.penalty, &evolution)?;
    let enhanced = enhance(&original, &result.best.params)?;

    let out_path = cfg.output_dir.join(rel);
    if let Some(parent) = out_path.parent() {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    save_image(&enhanced, &out_path)?;

    let (psnr_value, ssim_value) = match &cfg.reference_dir {
        Some(dir) if dir.join(rel).is_file() => {
            let reference = load_image(dir.join(rel))?;
            (
                Some(Psnr::from(psnr(&enhanced, &reference)?)),
                Some(ssim(&enhanced, &reference)?),
            )
        }
        _ => (None, None),
    };

    let runtime_ms = if cfg.record_runtime {
        start.elapsed().as_millis() as u64
    } else {
        0
    };
    Ok(Outcome {
        report: MetricsReport {
            image_id: id.to_string(),
            entropy_before: image_entropy(&original),
            entropy_after: image_entropy(&enhanced),
            brightness_before: mean_brightness(&original),
            brightness_after: mean_brightness(&enhanced),
            params: result.best.params,
            psnr: psnr_value,
            ssim: ssim_value,
            runtime_ms,
            extra_scores: Default::default(),
        },
        trace: result.history,
    })
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

fn ensure_writable(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let probe = dir.join(".nsga-enhance-write-probe");
    fs::File::create(&probe)
        .and_then(|mut f| f.write_all(b"ok"))
        .map_err(|e| Error::io(&probe, e))?;
    fs::remove_file(&probe).map_err(|e| Error::io(&probe, e))
}

/// Runs the whole batch. Configuration problems and an unwritable output
/// directory abort before any image is touched; per-image failures are
/// collected in the summary.
pub fn run_batch(cfg: &RunConfig) -> Result<RunSummary> {
    let start = Instant::now();
    cfg.validate()?;
    ensure_writable(&cfg.output_dir)?;
    let extractor = build_extractor(&cfg.extractor)?;
    let inputs = discover_inputs(&cfg.input_dir)?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    let outcomes: Vec<(String, Result<Outcome>)> = pool.install(|| {
        inputs
            .par_iter()
            .map(|rel| {
                let id = image_id(rel);
                let outcome = process_image(rel, &id, cfg, extractor.as_ref());
                (id, outcome)
            })
            .collect()
    });

    let mut reports = Vec::new();
    let mut failures = Vec::new();
    let mut trace = Vec::new();
    for (id, outcome) in outcomes {
        match outcome {
            Ok(o) => {
                trace.extend(o.trace.into_iter().map(|stats| TraceRecord {
                    image_id: id.clone(),
                    stats,
                }));
                reports.push(o.report);
            }
            Err(e) => failures.push((id, e.to_string())),
        }
    }

    write_file(&cfg.output_dir.join("report.csv"), &reports_to_csv(&reports)?)?;
    write_file(&cfg.output_dir.join("report.json"), &reports_to_json(&reports)?)?;
    if cfg.trace {
        let mut lines = Vec::new();
        for rec in &trace {
            serde_json::to_writer(&mut lines, rec).map_err(|e| Error::Report(e.to_string()))?;
            lines.push(b'\n');
        }
        write_file(&cfg.output_dir.join("trace.jsonl"), &lines)?;
    }

    Ok(RunSummary {
        discovered: inputs.len(),
        images_processed: reports.len(),
        failures,
        means: ReportMeans::from_reports(&reports),
        wall_time_ms: start.elapsed().as_millis() as u64,
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fnv_reference_values() {
        assert_eq!(fnv1a64(b""), 0xcbf29ce484222325);
        assert_eq!(fnv1a64(b"a"), 0xaf63dc4c8601ec8c);
        assert_eq!(fnv1a64(b"foobar"), 0x85944171f73967e8);
    }

    #[test]
    fn discovery_sorts_and_filters() {
        let dir = tempfile::tempdir().unwrap();
        assert!(discover_inputs(dir.path()).unwrap().is_empty());
        for name in ["b.png", "a.jpg", "notes.txt", "sub/c.BMP", "sub/deeper/d.jpeg"] {
            let p = dir.path().join(name);
            fs::create_dir_all(p.parent().unwrap()).unwrap();
            fs::write(p, b"x").unwrap();
        }
        let ids: Vec<String> = discover_inputs(dir.path())
            .unwrap()
            .iter()
            .map(|p| image_id(p))
            .collect();
        assert_eq!(ids, ["a.jpg", "b.png", "sub/c.BMP", "sub/deeper/d.jpeg"]);
    }

    #[test]
    fn discovery_of_missing_dir_fails() {
        let dir = tempfile::tempdir().unwrap();
        assert!(discover_inputs(dir.path().join("nope")).is_err());
    }

    #[test]
    fn config_parsing() {
        let cfg = RunConfig::from_toml_str(
            r#"
            input_dir = "in"
            output_dir = "out"
            workers = 3
            [penalty]
            hi = 0.65
            [evolution]
            generations = 2
            [extractor]
            kind = "deep-model"
            model_path = "m.onnx"
            pooled_dim = 512
            "#,
        )
        .unwrap();
        assert_eq!(cfg.workers, 3);
        assert_eq!(cfg.penalty, PenaltyConfig { hi: 0.65, ..Default::default() });
        assert_eq!(cfg.evolution.generations, 2);
        assert_eq!(cfg.evolution.pop_size, 50);
        assert_eq!(cfg.extractor.model_path.as_deref(), Some(Path::new("m.onnx")));
        assert_eq!(cfg.extractor.input_size, 224);
        assert!(RunConfig::from_toml_str("bogus_key = 1").is_err());
    }

    #[test]
    fn validation_catches_bad_configs() {
        let dir = tempfile::tempdir().unwrap();
        let good = RunConfig {
            input_dir: dir.path().to_path_buf(),
            output_dir: dir.path().join("out"),
            ..Default::default()
        };
        good.validate().unwrap();
        assert!(RunConfig { workers: 0, ..good.clone() }.validate().is_err());
        assert!(RunConfig { input_dir: dir.path().join("missing"), ..good.clone() }.validate().is_err());
        let mut odd = good.clone();
        odd.evolution.pop_size = 5;
        assert!(odd.validate().is_err());
    }
}
