//! Seeded noise models: additive Gaussian, multiplicative speckle, and
//! salt & pepper impulses.
//!
//! All randomness comes from [`RngStream`], a ChaCha8 generator seeded
//! through `rand_core`'s `seed_from_u64`. Both are specified algorithms with
//! value-stable output, so a seed reproduces the same noise on every
//! platform. Samples are drawn in row-major, channel-interleaved order.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::image::{to_u8, Image};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NoiseKind {
    /// Additive zero-mean normal noise; param is the variance on the [0,1] scale.
    Gaussian,
    /// `s + s*u` with `u` uniform and zero-mean; param is `Var(u)`.
    Speckle,
    /// Whole-pixel impulses to all-0 or all-255; param is the density.
    SaltPepper,
    /// Impulses applied to each channel independently.
    SaltPepperPerChannel,
}

impl NoiseKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            NoiseKind::Gaussian => "gaussian",
            NoiseKind::Speckle => "speckle",
            NoiseKind::SaltPepper => "sp",
            NoiseKind::SaltPepperPerChannel => "spc",
        }
    }

    pub fn is_impulse(&self) -> bool {
        matches!(self, NoiseKind::SaltPepper | NoiseKind::SaltPepperPerChannel)
    }
}

impl FromStr for NoiseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "gaussian" | "gauss" => Ok(NoiseKind::Gaussian),
            "speckle" => Ok(NoiseKind::Speckle),
            "sp" | "salt_pepper" => Ok(NoiseKind::SaltPepper),
            "spc" | "salt_pepper_channel" => Ok(NoiseKind::SaltPepperPerChannel),
            other => Err(Error::parse("noise kind", other)),
        }
    }
}

/// A noise model with its parameter and seed, written `kind:param:seed`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    pub param: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(kind: NoiseKind, param: f64, seed: u64) -> Result<Self> {
        let spec = NoiseSpec { kind, param, seed };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.param.is_finite() || self.param < 0.0 {
            return Err(Error::InvalidNoise(format!(
                "{} parameter must be finite and >= 0, got {}",
                self.kind.as_str(),
                self.param
            )));
        }
        if self.kind.is_impulse() && self.param > 1.0 {
            return Err(Error::InvalidNoise(format!(
                "impulse density must lie in [0,1], got {}",
                self.param
            )));
        }
        Ok(())
    }

    /// Parses `kind:param[:seed]`; `fallback_seed` fills a missing seed.
    pub fn parse_with_seed(s: &str, fallback_seed: Option<u64>) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let (kind, param, seed) = match parts.as_slice() {
            [k, p] => (k, p, None),
            [k, p, seed] => (
                k,
                p,
                Some(
                    seed.trim()
                        .parse::<u64>()
                        .map_err(|_| Error::parse("noise seed", *seed))?,
                ),
            ),
            _ => return Err(Error::parse("noise spec (kind:param:seed)", s)),
        };
        let kind: NoiseKind = kind.parse()?;
        let param: f64 = param
            .trim()
            .parse()
            .map_err(|_| Error::parse("noise parameter", *param))?;
        let seed = seed
            .or(fallback_seed)
            .ok_or_else(|| Error::InvalidNoise(format!("no seed given for {s:?}")))?;
        NoiseSpec::new(kind, param, seed)
    }

    /// Corrupts `img` with a stream seeded from this spec's own seed.
    pub fn corrupt(&self, img: &Image) -> Result<Image> {
        self.apply(img, &mut RngStream::from_seed(self.seed))
    }

    /// Corrupts `img` drawing from an externally owned stream.
    pub fn apply(&self, img: &Image, rng: &mut RngStream) -> Result<Image> {
        match self.kind {
            NoiseKind::Gaussian => add_gaussian(img, self.param, rng),
            NoiseKind::Speckle => add_speckle(img, self.param, rng),
            NoiseKind::SaltPepper => add_salt_pepper(img, self.param, rng),
            NoiseKind::SaltPepperPerChannel => add_salt_pepper_per_channel(img, self.param, rng),
        }
    }
}

impl fmt::Display for NoiseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.kind.as_str(), self.param, self.seed)
    }
}

impl FromStr for NoiseSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NoiseSpec::parse_with_seed(s, None)
    }
}

/// Deterministic random stream (ChaCha8).
#[derive(Debug, Clone)]
pub struct RngStream(ChaCha8Rng);

impl RngStream {
    pub fn from_seed(seed: u64) -> Self {
        RngStream(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Stream keyed by a master seed and a list of labels: the seed is the
    /// first 8 bytes (little endian) of SHA-256 over the seed and the
    /// length-prefixed labels.
    pub fn derived(master_seed: u64, labels: &[&str]) -> Self {
        let mut h = Sha256::new();
        h.update(master_seed.to_le_bytes());
        for label in labels {
            h.update((label.len() as u64).to_le_bytes());
            h.update(label.as_bytes());
        }
        let digest = h.finalize();
        let mut first = [0u8; 8];
        first.copy_from_slice(&digest[..8]);
        RngStream::from_seed(u64::from_le_bytes(first))
    }

    fn unit(&mut self) -> f64 {
        self.0.random::<f64>()
    }

    fn normal(&mut self) -> f64 {
        self.0.sample(StandardNormal)
    }

    fn coin(&mut self) -> bool {
        self.0.random::<bool>()
    }
}

fn check_variance(variance: f64) -> Result<()> {
    if variance.is_finite() && variance >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidNoise(format!(
            "variance must be finite and >= 0, got {variance}"
        )))
    }
}

fn check_density(density: f64) -> Result<()> {
    if (0.0..=1.0).contains(&density) {
        Ok(())
    } else {
        Err(Error::InvalidNoise(format!(
            "density must lie in [0,1], got {density}"
        )))
    }
}

fn map_samples(img: &Image, mut f: impl FnMut(u8) -> u8) -> Image {
    let data = img.data().iter().map(|&s| f(s)).collect();
    Image::new(img.width(), img.height(), img.channels(), data)
        .expect("shape preserved from a valid image")
}

/// `s' = round_clamp(255 * (s/255 + n))`, `n ~ N(0, variance)` per sample.
pub fn add_gaussian(img: &Image, variance: f64, rng: &mut RngStream) -> Result<Image> {
    check_variance(variance)?;
    let sigma = variance.sqrt();
    Ok(map_samples(img, |s| {
        let n = sigma * rng.normal();
        to_u8(f64::from(s) + 255.0 * n)
    }))
}

/// `s' = round_clamp(s + s*u)`, `u ~ U(-a, a)` with `a = sqrt(3 * variance)`.
pub fn add_speckle(img: &Image, variance: f64, rng: &mut RngStream) -> Result<Image> {
    check_variance(variance)?;
    let a = (3.0 * variance).sqrt();
    Ok(map_samples(img, |s| {
        let u = a * (2.0 * rng.unit() - 1.0);
        let s = f64::from(s);
        to_u8(s + s * u)
    }))
}

/// Each pixel is hit with probability `density`; a hit sets every channel
/// to 0 or 255 (fair coin).
pub fn add_salt_pepper(img: &Image, density: f64, rng: &mut RngStream) -> Result<Image> {
    check_density(density)?;
    let mut data = img.data().to_vec();
    for px in data.chunks_exact_mut(img.channels()) {
        if rng.unit() < density {
            let v = if rng.coin() { 255 } else { 0 };
            px.fill(v);
        }
    }
    Image::new(img.width(), img.height(), img.channels(), data)
}

/// Like [`add_salt_pepper`] but each channel sample is hit independently.
pub fn add_salt_pepper_per_channel(
    img: &Image,
    density: f64,
    rng: &mut RngStream,
) -> Result<Image> {
    check_density(density)?;
    Ok(map_samples(img, |s| {
        if rng.unit() < density {
            if rng.coin() {
                255
            } else {
                0
            }
        } else {
            s
        }
    }))
}
