//! Image data model and sliding-window extraction.
//!
//! An [`Image`] is an immutable 8-bit raster with one (gray) or three (RGB)
//! interleaved channels. Filters never touch `u8` samples directly: windows
//! hand out [`PixelVec`]s, small real-valued vectors, and results are written
//! back through [`PixelVec::write_u8`] (round half up, then clamp).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub const MAX_CHANNELS: usize = 3;

/// Row-major, channel-interleaved 8-bit image.
#[derive(Clone, PartialEq, Eq)]
pub struct Image {
    width: usize,
    height: usize,
    channels: usize,
    data: Vec<u8>,
}

impl Image {
    pub fn new(width: usize, height: usize, channels: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions must be positive, got {width}x{height}"
            )));
        }
        if channels != 1 && channels != 3 {
            return Err(Error::InvalidImage(format!(
                "channel count must be 1 or 3, got {channels}"
            )));
        }
        let expected = width
            .checked_mul(height)
            .and_then(|n| n.checked_mul(channels))
            .ok_or_else(|| Error::InvalidImage("dimensions overflow".into()))?;
        if data.len() != expected {
            return Err(Error::InvalidImage(format!(
                "expected {expected} samples, got {}",
                data.len()
            )));
        }
        Ok(Image {
            width,
            height,
            channels,
            data,
        })
    }

    /// Image with every sample set to `value`.
    pub fn filled(width: usize, height: usize, channels: usize, value: u8) -> Result<Self> {
        let len = width.saturating_mul(height).saturating_mul(channels);
        Image::new(width, height, channels, vec![value; len])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    /// `(width, height, channels)`
    pub fn shape(&self) -> (usize, usize, usize) {
        (self.width, self.height, self.channels)
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    /// Samples of the pixel at column `x`, row `y`.
    ///
    /// Panics if the coordinate is out of range.
    pub fn pixel(&self, x: usize, y: usize) -> &[u8] {
        assert!(x < self.width && y < self.height, "pixel ({x},{y}) out of range");
        let start = (y * self.width + x) * self.channels;
        &self.data[start..start + self.channels]
    }

    pub fn pixel_vec(&self, x: usize, y: usize) -> PixelVec {
        PixelVec::from_u8(self.pixel(x, y))
    }
}

impl fmt::Debug for Image {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Image")
            .field("width", &self.width)
            .field("height", &self.height)
            .field("channels", &self.channels)
            .field("samples", &self.data.len())
            .finish()
    }
}

/// A pixel as a real-valued vector of 1 or 3 components.
#[derive(Clone, Copy, PartialEq)]
pub struct PixelVec {
    comps: [f64; MAX_CHANNELS],
    len: u8,
}

impl PixelVec {
    /// Panics if `values` has more than three components.
    pub fn new(values: &[f64]) -> Self {
        assert!(
            !values.is_empty() && values.len() <= MAX_CHANNELS,
            "pixel must have 1..=3 components"
        );
        let mut comps = [0.0; MAX_CHANNELS];
        comps[..values.len()].copy_from_slice(values);
        PixelVec {
            comps,
            len: values.len() as u8,
        }
    }

    pub fn from_u8(samples: &[u8]) -> Self {
        let mut comps = [0.0; MAX_CHANNELS];
        for (c, &s) in comps.iter_mut().zip(samples) {
            *c = f64::from(s);
        }
        PixelVec {
            comps,
            len: samples.len() as u8,
        }
    }

    pub fn zeros(len: usize) -> Self {
        assert!((1..=MAX_CHANNELS).contains(&len));
        PixelVec {
            comps: [0.0; MAX_CHANNELS],
            len: len as u8,
        }
    }

    pub fn len(&self) -> usize {
        usize::from(self.len)
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.comps[..self.len()]
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [f64] {
        let len = self.len();
        &mut self.comps[..len]
    }

    pub fn squared_norm(&self) -> f64 {
        self.as_slice().iter().map(|v| v * v).sum()
    }

    pub fn distance(&self, other: &PixelVec) -> f64 {
        self.as_slice()
            .iter()
            .zip(other.as_slice())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Writes the components as 8-bit samples: round half up, then clamp.
    pub fn write_u8(&self, out: &mut [u8]) {
        for (o, &v) in out.iter_mut().zip(self.as_slice()) {
            *o = to_u8(v);
        }
    }
}

impl fmt::Debug for PixelVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.as_slice()).finish()
    }
}

/// Round half up, then clamp to `[0, 255]`.
pub fn to_u8(v: f64) -> u8 {
    let r = (v + 0.5).floor();
    if r.is_nan() || r <= 0.0 {
        0
    } else if r >= 255.0 {
        255
    } else {
        r as u8
    }
}

/// How coordinates outside the image are resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum BorderPolicy {
    /// Clamp to the nearest edge pixel.
    #[default]
    Replicate,
    /// Mirror about the edge pixel without repeating it (`-1 -> 1`).
    Reflect,
    /// Out-of-range pixels read as all-zero.
    Zero,
}

impl BorderPolicy {
    pub fn as_str(&self) -> &'static str {
        match self {
            BorderPolicy::Replicate => "replicate",
            BorderPolicy::Reflect => "reflect",
            BorderPolicy::Zero => "zero",
        }
    }

    /// Maps a possibly out-of-range coordinate on an axis of length `len`.
    /// `None` means "outside, use zero".
    fn resolve(self, i: isize, len: usize) -> Option<usize> {
        let n = len as isize;
        if (0..n).contains(&i) {
            return Some(i as usize);
        }
        match self {
            BorderPolicy::Replicate => Some(i.clamp(0, n - 1) as usize),
            BorderPolicy::Reflect => {
                if n == 1 {
                    return Some(0);
                }
                let period = 2 * (n - 1);
                let m = i.rem_euclid(period);
                Some(if m >= n { period - m } else { m } as usize)
            }
            BorderPolicy::Zero => None,
        }
    }
}

impl fmt::Display for BorderPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BorderPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "replicate" => Ok(BorderPolicy::Replicate),
            "reflect" => Ok(BorderPolicy::Reflect),
            "zero" => Ok(BorderPolicy::Zero),
            other => Err(Error::parse("border policy", other)),
        }
    }
}

/// The k×k neighbourhood of a pixel in row-major mask order.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    pixels: Vec<PixelVec>,
    side: usize,
}

impl Window {
    /// Builds a window from `side * side` pixels in row-major mask order.
    pub fn new(pixels: Vec<PixelVec>, side: usize) -> Result<Self> {
        validate_side(side)?;
        if pixels.len() != side * side {
            return Err(Error::InvalidImage(format!(
                "a {side}x{side} window needs {} pixels, got {}",
                side * side,
                pixels.len()
            )));
        }
        if let Some(first) = pixels.first() {
            if pixels.iter().any(|p| p.len() != first.len()) {
                return Err(Error::InvalidImage("mixed channel counts in window".into()));
            }
        }
        Ok(Window { pixels, side })
    }

    /// Window over 1-channel values, handy for tests and examples.
    pub fn gray(values: &[f64]) -> Result<Self> {
        let side = (values.len() as f64).sqrt().round() as usize;
        Window::new(values.iter().map(|&v| PixelVec::new(&[v])).collect(), side)
    }

    pub fn pixels(&self) -> &[PixelVec] {
        &self.pixels
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn channels(&self) -> usize {
        self.pixels[0].len()
    }

    pub fn center_index(&self) -> usize {
        (self.pixels.len() - 1) / 2
    }

    pub fn center(&self) -> PixelVec {
        self.pixels[self.center_index()]
    }

    pub fn into_pixels(self) -> Vec<PixelVec> {
        self.pixels
    }
}

pub(crate) fn validate_side(k: usize) -> Result<()> {
    if k == 0 || k % 2 == 0 {
        Err(Error::InvalidMask(k))
    } else {
        Ok(())
    }
}

/// Extracts the k×k window centred on column `x`, row `y`.
pub fn extract_window(
    img: &Image,
    x: usize,
    y: usize,
    k: usize,
    policy: BorderPolicy,
) -> Result<Window> {
    validate_side(k)?;
    if x >= img.width || y >= img.height {
        return Err(Error::OutOfBounds {
            x,
            y,
            width: img.width,
            height: img.height,
        });
    }
    let mut pixels = Vec::with_capacity(k * k);
    fill_window(img, x, y, k, policy, &mut pixels);
    Ok(Window { pixels, side: k })
}

/// Unchecked fill used by the filter engine to reuse one buffer per row.
pub(crate) fn fill_window(
    img: &Image,
    x: usize,
    y: usize,
    k: usize,
    policy: BorderPolicy,
    out: &mut Vec<PixelVec>,
) {
    out.clear();
    let r = (k / 2) as isize;
    for dy in -r..=r {
        let yy = policy.resolve(y as isize + dy, img.height);
        for dx in -r..=r {
            let xx = policy.resolve(x as isize + dx, img.width);
            out.push(match (xx, yy) {
                (Some(xx), Some(yy)) => img.pixel_vec(xx, yy),
                _ => PixelVec::zeros(img.channels),
            });
        }
    }
}

pub(crate) fn window_from_buffer(pixels: Vec<PixelVec>, side: usize) -> Window {
    Window { pixels, side }
}
