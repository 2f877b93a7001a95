//! Quality measures and per-image reports.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::enhance::EnhanceParams;
use crate::error::{Error, Result};
use crate::image_core::{to_grayscale, ImageBuffer};

pub const SSIM_WINDOW: usize = 11;
pub const SSIM_SIGMA: f64 = 1.5;
pub const SSIM_C1: f64 = (0.01 * 255.0) * (0.01 * 255.0);
pub const SSIM_C2: f64 = (0.03 * 255.0) * (0.03 * 255.0);

fn same_dims(a: &ImageBuffer, b: &ImageBuffer) -> Result<()> {
    if a.width() != b.width() || a.height() != b.height() {
        return Err(Error::DimensionMismatch(a.width(), a.height(), b.width(), b.height()));
    }
    Ok(())
}

/// Mean squared error over all RGB values on the 8-bit scale.
pub fn mse_8bit(a: &ImageBuffer, b: &ImageBuffer) -> Result<f64> {
    same_dims(a, b)?;
    let sum: f64 = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| {
            let d = (x - y) * 255.0;
            d * d
        })
        .sum();
    Ok(sum / a.data().len() as f64)
}

/// `10 log10(255^2 / MSE)` in dB; identical images give `+inf`.
pub fn psnr(a: &ImageBuffer, b: &ImageBuffer) -> Result<f64> {
    let mse = mse_8bit(a, b)?;
    if mse == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (255.0 * 255.0 / mse).log10())
}

/// Normalized 1-D Gaussian taps.
pub fn gaussian_kernel(size: usize, sigma: f64) -> Vec<f64> {
    let c = (size as f64 - 1.0) / 2.0;
    let raw: Vec<f64> = (0..size)
        .map(|i| (-(i as f64 - c).powi(2) / (2.0 * sigma * sigma)).exp())
        .collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / total).collect()
}

/// Separable "valid" filtering of a `w x h` plane.
fn filter_valid(src: &[f64], w: usize, h: usize, k: &[f64]) -> Vec<f64> {
    let n = k.len();
    let (ow, oh) = (w - n + 1, h - n + 1);
    let mut rows = vec![0.0; ow * h];
    for y in 0..h {
        let line = &src[y * w..(y + 1) * w];
        for x in 0..ow {
            rows[y * ow + x] = k.iter().zip(&line[x..x + n]).map(|(a, b)| a * b).sum();
        }
    }
    let mut out = vec![0.0; ow * oh];
    for y in 0..oh {
        for x in 0..ow {
            out[y * ow + x] = k.iter().enumerate().map(|(i, kv)| kv * rows[(y + i) * ow + x]).sum();
        }
    }
    out
}

/// Mean SSIM over all 11x11 Gaussian windows (sigma 1.5) of the 8-bit luma.
pub fn ssim(a: &ImageBuffer, b: &ImageBuffer) -> Result<f64> {
    same_dims(a, b)?;
    let (w, h) = (a.width(), a.height());
    if w < SSIM_WINDOW || h < SSIM_WINDOW {
        return Err(Error::ImageTooSmall {
            width: w,
            height: h,
            window: SSIM_WINDOW,
        });
    }
    let x: Vec<f64> = to_grayscale(a).data.iter().map(|v| v * 255.0).collect();
    let y: Vec<f64> = to_grayscale(b).data.iter().map(|v| v * 255.0).collect();
    let xx: Vec<f64> = x.iter().map(|v| v * v).collect();
    let yy: Vec<f64> = y.iter().map(|v| v * v).collect();
    let xy: Vec<f64> = x.iter().zip(&y).map(|(p, q)| p * q).collect();

    let k = gaussian_kernel(SSIM_WINDOW, SSIM_SIGMA);
    let [mx, my, exx, eyy, exy] = [&x, &y, &xx, &yy, &xy].map(|p| filter_valid(p, w, h, &k));

    let total: f64 = (0..mx.len())
        .map(|i| {
            let (ux, uy) = (mx[i], my[i]);
            let sxx = exx[i] - ux * ux;
            let syy = eyy[i] - uy * uy;
            let sxy = exy[i] - ux * uy;
            ((2.0 * ux * uy + SSIM_C1) * (2.0 * sxy + SSIM_C2))
                / ((ux * ux + uy * uy + SSIM_C1) * (sxx + syy + SSIM_C2))
        })
        .sum();
    Ok(total / mx.len() as f64)
}

/// A PSNR value, or the marker for identical images.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Psnr {
    Db(f64),
    Identical,
}

impl From<f64> for Psnr {
    fn from(v: f64) -> Self {
        if v.is_infinite() {
            Psnr::Identical
        } else {
            Psnr::Db(v)
        }
    }
}

impl fmt::Display for Psnr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Psnr::Db(v) => write!(f, "{v}"),
            Psnr::Identical => f.write_str("identical"),
        }
    }
}

impl Serialize for Psnr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Psnr::Db(v) => s.serialize_f64(*v),
            Psnr::Identical => s.serialize_str("identical"),
        }
    }
}

impl<'de> Deserialize<'de> for Psnr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Psnr::Db(v)),
            Raw::Text(t) if t == "identical" => Ok(Psnr::Identical),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("invalid psnr {t:?}"))),
        }
    }
}

/// Fixed CSV column order.
pub const REPORT_COLUMNS: [&str; 11] = [
    "image_id",
    "entropy_before",
    "entropy_after",
    "brightness_before",
    "brightness_after",
    "b",
    "c",
    "gamma",
    "psnr",
    "ssim",
    "runtime_ms",
];

/// Per-image outcome of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub image_id: String,
    pub entropy_before: f64,
    pub entropy_after: f64,
    pub brightness_before: f64,
    pub brightness_after: f64,
    pub params: EnhanceParams,
    /// Only present when a reference image exists.
    pub psnr: Option<Psnr>,
    pub ssim: Option<f64>,
    pub runtime_ms: u64,
    /// Slots for externally computed scores (e.g. no-reference quality
    /// models); not part of the CSV.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extra_scores: BTreeMap<String, f64>,
}

impl MetricsReport {
    pub fn csv_record(&self) -> [String; 11] {
        let opt = |v: Option<String>| v.unwrap_or_default();
        [
            self.image_id.clone(),
            self.entropy_before.to_string(),
            self.entropy_after.to_string(),
            self.brightness_before.to_string(),
            self.brightness_after.to_string(),
            self.params.b.to_string(),
            self.params.c.to_string(),
            self.params.gamma.to_string(),
            opt(self.psnr.map(|p| p.to_string())),
            opt(self.ssim.map(|s| s.to_string())),
            self.runtime_ms.to_string(),
        ]
    }
}

/// Header plus one row per report.
pub fn reports_to_csv(reports: &[MetricsReport]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Error::Report(e.to_string());
    w.write_record(REPORT_COLUMNS).map_err(err)?;
    for r in reports {
        w.write_record(r.csv_record()).map_err(err)?;
    }
    w.into_inner().map_err(|e| Error::Report(e.to_string()))
}

/// A pretty-printed JSON array of reports.
pub fn reports_to_json(reports: &[MetricsReport]) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(reports).map_err(|e| Error::Report(e.to_string()))?;
    out.push(b'\n');
    Ok(out)
}
