//! MSE and PSNR between a reference and a candidate image.
//!
//! PSNR uses `20 * log10(peak / sqrt(MSE))` with a configurable peak. The
//! default peak is 256 rather than the more common 255, so scores line up
//! with published tables computed that way; pass [`Peak::P255`] for the
//! conventional value.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::image::Image;

/// Numerator of the PSNR ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Peak {
    P255,
    #[default]
    P256,
}

impl Peak {
    pub fn value(self) -> f64 {
        match self {
            Peak::P255 => 255.0,
            Peak::P256 => 256.0,
        }
    }
}

impl fmt::Display for Peak {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl FromStr for Peak {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "255" => Ok(Peak::P255),
            "256" => Ok(Peak::P256),
            other => Err(Error::parse("peak (255 or 256)", other)),
        }
    }
}

/// PSNR in decibels, or infinite when the images are identical.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Psnr {
    Finite(f64),
    Infinite,
}

impl Psnr {
    pub fn finite(self) -> Option<f64> {
        match self {
            Psnr::Finite(v) => Some(v),
            Psnr::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Psnr::Infinite)
    }
}

impl fmt::Display for Psnr {
    /// Honours the formatter's precision; infinite prints as `inf`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Psnr::Finite(v) => match f.precision() {
                Some(p) => write!(f, "{v:.p$}"),
                None => write!(f, "{v}"),
            },
            Psnr::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Psnr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" => Ok(Psnr::Infinite),
            v => v
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .map(Psnr::Finite)
                .ok_or_else(|| Error::parse("PSNR", v)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Score {
    pub mse: f64,
    pub psnr: Psnr,
}

/// Mean of squared sample differences over all samples of both images.
///
/// The squared-error sum is accumulated exactly in integers and divided once.
pub fn mse(a: &Image, b: &Image) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch {
            a: a.shape(),
            b: b.shape(),
        });
    }
    let sum: u64 = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(&x, &y)| {
            let d = u64::from(x.abs_diff(y));
            d * d
        })
        .sum();
    Ok(sum as f64 / a.data().len() as f64)
}

/// PSNR with the default peak of 256.
pub fn psnr(mse_value: f64) -> Result<Psnr> {
    psnr_with_peak(mse_value, Peak::default())
}

pub fn psnr_with_peak(mse_value: f64, peak: Peak) -> Result<Psnr> {
    if !mse_value.is_finite() || mse_value < 0.0 {
        return Err(Error::InvalidMse(mse_value));
    }
    if mse_value == 0.0 {
        return Ok(Psnr::Infinite);
    }
    Ok(Psnr::Finite(20.0 * (peak.value() / mse_value.sqrt()).log10()))
}

pub fn score(reference: &Image, candidate: &Image, peak: Peak) -> Result<Score> {
    let mse = mse(reference, candidate)?;
    Ok(Score {
        mse,
        psnr: psnr_with_peak(mse, peak)?,
    })
}
