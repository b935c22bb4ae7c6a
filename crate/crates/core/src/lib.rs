//! Nonlinear denoising filters for 8-bit gray and RGB images.
//!
//! The crate provides six window filters (mean, magnitude median, component
//! median, vector median, spatial median, modified spatial median), three
//! seeded noise models, MSE/PSNR scoring and a benchmark runner that fills
//! the filter-by-noise comparison grid over an image corpus.
//!
//! ```
//! use nlfilter::{apply_filter, BorderPolicy, FilterId, Image, NoiseSpec};
//!
//! let clean = Image::filled(32, 32, 1, 128).unwrap();
//! let noisy = "sp:0.3:42".parse::<NoiseSpec>().unwrap().corrupt(&clean).unwrap();
//! let restored = apply_filter(&noisy, FilterId::Msmf { threshold: 4 }, 3, BorderPolicy::Replicate).unwrap();
//! let score = nlfilter::metrics::score(&clean, &restored, Default::default()).unwrap();
//! assert!(score.mse < nlfilter::metrics::mse(&clean, &noisy).unwrap());
//! ```

pub mod bench;
pub mod error;
pub mod filters;
pub mod image;
pub mod metrics;
pub mod noise;
pub mod pnm;

pub use error::{Error, Result};
pub use filters::{apply_filter, FilterId};
pub use image::{extract_window, BorderPolicy, Image, PixelVec, Window};
pub use metrics::{Peak, Psnr, Score};
pub use noise::{NoiseKind, NoiseSpec, RngStream};
pub use pnm::{decode_pnm, encode_pnm, read_pnm, write_pnm};
