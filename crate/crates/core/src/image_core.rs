//! Normalized RGB buffers and the scalar statistics computed on them.

use std::path::Path;

use image::{ImageFormat, RgbImage};

use crate::error::{Error, Result};

/// Luma weights (ITU-R BT.601).
pub const LUMA_WEIGHTS: [f64; 3] = [0.299, 0.587, 0.114];

/// Number of gray levels in a [`GrayHistogram`].
pub const GRAY_LEVELS: usize = 256;

/// An RGB image with values in `[0, 1]`, row-major and channel-interleaved.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageBuffer {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl ImageBuffer {
    /// Builds a buffer, rejecting empty dimensions, wrong lengths and values
    /// outside `[0, 1]`.
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidDimensions { width, height });
        }
        let expected = width * height * 3;
        if data.len() != expected {
            return Err(Error::BufferLength {
                expected,
                actual: data.len(),
            });
        }
        if let Some(&bad) = data.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::PixelOutOfRange(bad));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    /// A buffer where every channel of every pixel equals `value`.
    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value; width * height * 3])
    }

    /// Builds a buffer from a per-pixel closure `(x, y) -> [r, g, b]`.
    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> [f64; 3],
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height * 3);
        for y in 0..height {
            for x in 0..width {
                data.extend_from_slice(&f(x, y));
            }
        }
        Self::new(width, height, data)
    }

    /// Applies `f` to every channel value and clamps the result into `[0, 1]`.
    /// The map must not produce NaN.
    pub(crate) fn map_clamped(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&v| f(v).clamp(0.0, 1.0)).collect(),
        }
    }

    pub fn from_rgb8(img: &RgbImage) -> Result<Self> {
        let (w, h) = img.dimensions();
        let data = img.as_raw().iter().map(|&v| f64::from(v) / 255.0).collect();
        Self::new(w as usize, h as usize, data)
    }

    /// Quantizes to 8 bits with `round(v * 255)`.
    pub fn to_rgb8(&self) -> RgbImage {
        let raw = self.data.iter().map(|&v| quantize_u8(v)).collect();
        RgbImage::from_raw(self.width as u32, self.height as u32, raw)
            .expect("buffer length is validated at construction")
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixel_count(&self) -> usize {
        self.width * self.height
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn pixel(&self, x: usize, y: usize) -> [f64; 3] {
        let i = (y * self.width + x) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }
}

/// `round(v * 255)` clamped into `0..=255`.
pub fn quantize_u8(v: f64) -> u8 {
    (v * 255.0).round().clamp(0.0, 255.0) as u8
}

/// A single-channel image with values in `[0, 1]`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub data: Vec<f64>,
}

impl GrayImage {
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }
}

/// 256-bin histogram of quantized gray levels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayHistogram {
    pub bins: [u64; GRAY_LEVELS],
    pub total: u64,
}

impl GrayHistogram {
    pub fn from_counts(bins: [u64; GRAY_LEVELS]) -> Self {
        let total = bins.iter().sum();
        Self { bins, total }
    }
}

/// Loads an 8-bit PNG, JPEG or BMP file as RGB in `[0, 1]`. Alpha is dropped.
pub fn load_image(path: impl AsRef<Path>) -> Result<ImageBuffer> {
    let path = path.as_ref();
    let reader = image::ImageReader::open(path)
        .map_err(|e| Error::io(path, e))?
        .with_guessed_format()
        .map_err(|e| Error::io(path, e))?;
    let decoded = reader.decode().map_err(|source| Error::Decode {
        path: path.to_path_buf(),
        source,
    })?;
    ImageBuffer::from_rgb8(&decoded.to_rgb8())
}

/// Writes an 8-bit RGB image; the format follows the file extension.
pub fn save_image(img: &ImageBuffer, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let format = ImageFormat::from_path(path).map_err(|source| Error::Encode {
        path: path.to_path_buf(),
        source,
    })?;
    img.to_rgb8()
        .save_with_format(path, format)
        .map_err(|source| Error::Encode {
            path: path.to_path_buf(),
            source,
        })
}

pub fn to_grayscale(img: &ImageBuffer) -> GrayImage {
    // Integer per-mille weights keep white at exactly 1.0.
    let data = img
        .data
        .chunks_exact(3)
        .map(|p| ((299.0 * p[0] + 587.0 * p[1] + 114.0 * p[2]) / 1000.0).clamp(0.0, 1.0))
        .collect();
    GrayImage {
        width: img.width,
        height: img.height,
        data,
    }
}

/// Gray level of `y`: `floor(y * 255 + 0.5)` clamped to `0..=255`.
pub fn gray_level(y: f64) -> usize {
    (y * 255.0 + 0.5).floor().clamp(0.0, 255.0) as usize
}

pub fn histogram256(gray: &GrayImage) -> GrayHistogram {
    let mut bins = [0u64; GRAY_LEVELS];
    for &y in &gray.data {
        bins[gray_level(y)] += 1;
    }
    GrayHistogram {
        bins,
        total: gray.data.len() as u64,
    }
}

/// Shannon entropy in bits, `-sum p log2 p`, with empty bins contributing 0.
pub fn shannon_entropy(hist: &GrayHistogram) -> Result<f64> {
    if hist.total == 0 {
        return Err(Error::EmptyHistogram);
    }
    let total = hist.total as f64;
    // p * log2(1/p) keeps every term non-negative, so a single occupied bin
    // yields +0.0 rather than -0.0.
    Ok(hist
        .bins
        .iter()
        .filter(|&&n| n > 0)
        .map(|&n| {
            let n = n as f64;
            (n / total) * (total / n).log2()
        })
        .sum())
}

/// Mean over every channel value of every pixel.
pub fn mean_brightness(img: &ImageBuffer) -> f64 {
    img.data.iter().sum::<f64>() / img.data.len() as f64
}

/// Grayscale entropy of an RGB buffer.
pub fn image_entropy(img: &ImageBuffer) -> f64 {
    shannon_entropy(&histogram256(&to_grayscale(img))).expect("images are never empty")
}
