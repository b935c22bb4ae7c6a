//! Mean, magnitude median, component median and vector median kernels.
//!
//! Every kernel maps a [`Window`] to one [`PixelVec`]. Ties always go to
//! the lowest window index.

use std::cmp::Ordering;

use crate::image::{PixelVec, Window};

/// Component-wise arithmetic mean.
pub fn mean(w: &Window) -> PixelVec {
    let mut acc = PixelVec::zeros(w.channels());
    for p in w.pixels() {
        for (a, v) in acc.as_mut_slice().iter_mut().zip(p.as_slice()) {
            *a += v;
        }
    }
    let n = w.len() as f64;
    for a in acc.as_mut_slice() {
        *a /= n;
    }
    acc
}

/// Index of the lower median (`N / 2` of the ascending order) under `key`,
/// ties ranked by index.
fn lower_median_by(len: usize, key: impl Fn(usize) -> f64) -> usize {
    let mut idx: Vec<usize> = (0..len).collect();
    idx.sort_by(|&a, &b| key(a).total_cmp(&key(b)).then(a.cmp(&b)));
    idx[len / 2]
}

/// The window pixel whose squared magnitude is the lower median.
pub fn median(w: &Window) -> PixelVec {
    let px = w.pixels();
    px[lower_median_by(px.len(), |i| px[i].squared_norm())]
}

/// Per-channel lower median; the result may be a new colour.
pub fn cmf(w: &Window) -> PixelVec {
    let mut out = PixelVec::zeros(w.channels());
    let mut column = Vec::with_capacity(w.len());
    for (c, slot) in out.as_mut_slice().iter_mut().enumerate() {
        column.clear();
        column.extend(w.pixels().iter().map(|p| p.as_slice()[c]));
        column.sort_by(f64::total_cmp);
        *slot = column[column.len() / 2];
    }
    out
}

/// Sum of Euclidean distances from `x` to every window pixel, summed in
/// window order.
pub fn distance_sum(x: &PixelVec, w: &Window) -> f64 {
    w.pixels().iter().map(|p| x.distance(p)).sum()
}

/// The window pixel minimising the summed distance to all others.
pub fn vmf(w: &Window) -> PixelVec {
    let px = w.pixels();
    let mut best = 0;
    let mut best_sum = f64::INFINITY;
    for (i, p) in px.iter().enumerate() {
        let s = distance_sum(p, w);
        if s.total_cmp(&best_sum) == Ordering::Less {
            best = i;
            best_sum = s;
        }
    }
    px[best]
}
