//! The six window kernels and the engine that slides them over an image.

mod depth;
mod kernels;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::image::{fill_window, validate_side, window_from_buffer, BorderPolicy, Image, PixelVec, Window};

pub use depth::{depth_ranking, msmf, smf, spatial_depth, DepthRanking};
pub use kernels::{cmf, distance_sum, mean, median, vmf};

pub const DEFAULT_MASK: usize = 3;
pub const DEFAULT_MSMF_THRESHOLD: usize = 4;

/// Filter selector, written `mean|median|cmf|vmf|smf|msmf:T`.
///
/// The derived ordering (declaration order, then `T`) is the order used
/// when sorting benchmark output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FilterId {
    Mean,
    Median,
    Cmf,
    Vmf,
    Smf,
    Msmf { threshold: usize },
}

impl FilterId {
    /// All six filters, MSMF with the default threshold.
    pub const ALL: [FilterId; 6] = [
        FilterId::Mean,
        FilterId::Median,
        FilterId::Cmf,
        FilterId::Vmf,
        FilterId::Smf,
        FilterId::Msmf {
            threshold: DEFAULT_MSMF_THRESHOLD,
        },
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FilterId::Mean => "mean",
            FilterId::Median => "median",
            FilterId::Cmf => "cmf",
            FilterId::Vmf => "vmf",
            FilterId::Smf => "smf",
            FilterId::Msmf { .. } => "msmf",
        }
    }

    /// Whether the output is always one of the window's own pixels.
    pub fn is_selection(&self) -> bool {
        !matches!(self, FilterId::Mean | FilterId::Cmf)
    }

    /// Runs the kernel on a single window.
    pub fn apply_window(&self, w: &Window) -> Result<PixelVec> {
        match *self {
            FilterId::Mean => Ok(mean(w)),
            FilterId::Median => Ok(median(w)),
            FilterId::Cmf => Ok(cmf(w)),
            FilterId::Vmf => Ok(vmf(w)),
            FilterId::Smf => smf(w),
            FilterId::Msmf { threshold } => msmf(threshold, w),
        }
    }
}

impl fmt::Display for FilterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FilterId::Msmf { threshold } => write!(f, "msmf:{threshold}"),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for FilterId {
    type Err = Error;

    /// Bare `msmf` takes the default threshold.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let id = match (name, arg) {
            ("mean", None) => FilterId::Mean,
            ("median", None) => FilterId::Median,
            ("cmf", None) => FilterId::Cmf,
            ("vmf", None) => FilterId::Vmf,
            ("smf", None) => FilterId::Smf,
            ("msmf", None) => FilterId::Msmf {
                threshold: DEFAULT_MSMF_THRESHOLD,
            },
            ("msmf", Some(t)) => {
                let threshold = t
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse("MSMF threshold", t))?;
                if threshold == 0 {
                    return Err(Error::InvalidThreshold { t: 0, n: 0 });
                }
                FilterId::Msmf { threshold }
            }
            _ => return Err(Error::parse("filter", s)),
        };
        Ok(id)
    }
}

/// Filters every pixel of `img` with a `k`×`k` mask.
///
/// Windows are always read from the unmodified input. Rows are processed in
/// parallel; since kernels are pure the result is identical to a sequential
/// pass. `k = 1` returns a copy of the input for every filter.
pub fn apply_filter(img: &Image, f: FilterId, k: usize, policy: BorderPolicy) -> Result<Image> {
    validate_side(k)?;
    if k == 1 {
        return Ok(img.clone());
    }
    if let FilterId::Msmf { threshold } = f {
        if threshold == 0 || threshold > k * k {
            return Err(Error::InvalidThreshold {
                t: threshold,
                n: k * k,
            });
        }
    }
    let stride = img.width() * img.channels();
    let channels = img.channels();
    let mut out = vec![0u8; img.data().len()];
    out.par_chunks_mut(stride)
        .enumerate()
        .try_for_each(|(y, row)| -> Result<()> {
            let mut buf = Vec::with_capacity(k * k);
            for (x, px) in row.chunks_exact_mut(channels).enumerate() {
                fill_window(img, x, y, k, policy, &mut buf);
                let w = window_from_buffer(std::mem::take(&mut buf), k);
                f.apply_window(&w)?.write_u8(px);
                buf = w.into_pixels();
            }
            Ok(())
        })?;
    Image::new(img.width(), img.height(), channels, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn textured(w: usize, h: usize, c: usize) -> Image {
        let data = (0..w * h * c)
            .map(|i| ((i * 37 + (i / 7) * 11) % 256) as u8)
            .collect();
        Image::new(w, h, c, data).unwrap()
    }

    #[test]
    fn filter_id_round_trip() {
        for s in ["mean", "median", "cmf", "vmf", "smf", "msmf:4", "msmf:9"] {
            assert_eq!(s.parse::<FilterId>().unwrap().to_string(), s);
        }
        assert_eq!(
            "msmf".parse::<FilterId>().unwrap(),
            FilterId::Msmf { threshold: 4 }
        );
        assert!("msmf:0".parse::<FilterId>().is_err());
        assert!("mean:3".parse::<FilterId>().is_err());
        assert!("gaussian".parse::<FilterId>().is_err());
    }

    #[test]
    fn unit_mask_is_identity() {
        let img = textured(9, 7, 3);
        for f in FilterId::ALL {
            assert_eq!(apply_filter(&img, f, 1, BorderPolicy::Zero).unwrap(), img);
        }
    }

    #[test]
    fn constant_image_is_fixed() {
        let img = Image::filled(11, 6, 3, 77).unwrap();
        for f in FilterId::ALL {
            for k in [3, 5] {
                for p in [BorderPolicy::Replicate, BorderPolicy::Reflect] {
                    assert_eq!(apply_filter(&img, f, k, p).unwrap(), img, "{f} k={k} {p}");
                }
            }
        }
    }

    #[test]
    fn input_is_not_modified_and_shape_kept() {
        let img = textured(13, 5, 1);
        let copy = img.clone();
        let out = apply_filter(&img, FilterId::Smf, 3, BorderPolicy::Replicate).unwrap();
        assert_eq!(img, copy);
        assert_eq!(out.shape(), img.shape());
    }

    #[test]
    fn matches_per_pixel_window_evaluation() {
        let img = textured(8, 6, 3);
        for f in FilterId::ALL {
            let out = apply_filter(&img, f, 3, BorderPolicy::Reflect).unwrap();
            for y in 0..img.height() {
                for x in 0..img.width() {
                    let w = crate::image::extract_window(&img, x, y, 3, BorderPolicy::Reflect)
                        .unwrap();
                    let mut px = [0u8; 3];
                    f.apply_window(&w).unwrap().write_u8(&mut px);
                    assert_eq!(out.pixel(x, y), &px, "{f} at ({x},{y})");
                }
            }
        }
    }

    #[test]
    fn threshold_checked_against_mask() {
        let img = textured(4, 4, 1);
        let f = FilterId::Msmf { threshold: 10 };
        assert!(matches!(
            apply_filter(&img, f, 3, BorderPolicy::Replicate),
            Err(Error::InvalidThreshold { t: 10, n: 9 })
        ));
        assert!(apply_filter(&img, f, 5, BorderPolicy::Replicate).is_ok());
        assert!(apply_filter(&img, FilterId::Mean, 4, BorderPolicy::Replicate).is_err());
    }
}
