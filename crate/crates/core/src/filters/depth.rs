//! Spatial depth and the depth-ranked filters (SMF, MSMF).
//!
//! For a point `x` of a window with `N` pixels,
//!
//! ```text
//! depth(x) = 1 - || sum_{x_i != x} (x - x_i) / ||x - x_i|| || / (N - 1)
//! ```
//!
//! Pixels equal to `x` contribute nothing. Central points score near 1 and
//! isolated outliers near 0; for members of the window the value always
//! lies in `[0, 1]`.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::image::{PixelVec, Window, MAX_CHANNELS};

/// Spatial depth of `x` with respect to the pixels of `w`.
pub fn spatial_depth(x: &PixelVec, w: &Window) -> Result<f64> {
    let n = w.len();
    if n < 2 {
        return Err(Error::WindowTooSmall(n));
    }
    Ok(depth_unchecked(x, w.pixels()))
}

fn depth_unchecked(x: &PixelVec, pixels: &[PixelVec]) -> f64 {
    let xs = x.as_slice();
    let mut sum = [0.0f64; MAX_CHANNELS];
    for p in pixels {
        let d = x.distance(p);
        if d == 0.0 {
            continue;
        }
        for ((s, a), b) in sum.iter_mut().zip(xs).zip(p.as_slice()) {
            *s += (a - b) / d;
        }
    }
    let norm = sum.iter().map(|v| v * v).sum::<f64>().sqrt();
    1.0 - norm / (pixels.len() - 1) as f64
}

/// Window indices ordered by decreasing spatial depth.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthRanking {
    /// Window indices, deepest first; equal depths keep ascending index order.
    pub order: Vec<usize>,
    /// Depth of each window pixel, indexed by window position.
    pub depths: Vec<f64>,
    /// 1-based rank of the window's centre pixel in `order`.
    pub center_rank: usize,
}

impl DepthRanking {
    /// Window index of the deepest pixel.
    pub fn deepest(&self) -> usize {
        self.order[0]
    }
}

pub fn depth_ranking(w: &Window) -> Result<DepthRanking> {
    let n = w.len();
    if n < 2 {
        return Err(Error::WindowTooSmall(n));
    }
    let px = w.pixels();
    let depths: Vec<f64> = px.iter().map(|p| depth_unchecked(p, px)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| depths[b].total_cmp(&depths[a]).then(a.cmp(&b)));
    let center = w.center_index();
    let center_rank = order
        .iter()
        .position(|&i| i == center)
        .expect("order is a permutation")
        + 1;
    Ok(DepthRanking {
        order,
        depths,
        center_rank,
    })
}

/// Spatial median filter: the deepest window pixel.
pub fn smf(w: &Window) -> Result<PixelVec> {
    let n = w.len();
    if n < 2 {
        return Err(Error::WindowTooSmall(n));
    }
    let px = w.pixels();
    let mut best = 0;
    let mut best_depth = f64::NEG_INFINITY;
    for (i, p) in px.iter().enumerate() {
        let d = depth_unchecked(p, px);
        if d.total_cmp(&best_depth) == Ordering::Greater {
            best = i;
            best_depth = d;
        }
    }
    Ok(px[best])
}

/// Modified spatial median filter.
///
/// The centre pixel is kept unchanged when its depth rank is at most `t`;
/// otherwise the deepest pixel replaces it.
pub fn msmf(t: usize, w: &Window) -> Result<PixelVec> {
    let n = w.len();
    if t == 0 || t > n {
        return Err(Error::InvalidThreshold { t, n });
    }
    let ranking = depth_ranking(w)?;
    if ranking.center_rank <= t {
        Ok(w.center())
    } else {
        Ok(w.pixels()[ranking.deepest()])
    }
}
