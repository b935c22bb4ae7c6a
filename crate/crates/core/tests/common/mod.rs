#![allow(dead_code)]

use std::path::{Path, PathBuf};

use nlfilter::{Image, PixelVec, Window};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Smooth textured test image: a few random plane waves, a couple of flat
/// rectangles with hard edges and mild fine-grained texture.
pub fn textured_image(width: usize, height: usize, channels: usize, seed: u64) -> Image {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let waves: Vec<[f64; 4]> = (0..4)
        .map(|_| {
            [
                rng.random_range(0.01..0.08),
                rng.random_range(0.01..0.08),
                rng.random_range(0.0..std::f64::consts::TAU),
                rng.random_range(10.0..30.0),
            ]
        })
        .collect();
    let rects: Vec<[usize; 4]> = (0..3)
        .map(|_| {
            let x0 = rng.random_range(0..width);
            let y0 = rng.random_range(0..height);
            [
                x0,
                y0,
                (x0 + rng.random_range(8..width / 2 + 9)).min(width),
                (y0 + rng.random_range(8..height / 2 + 9)).min(height),
            ]
        })
        .collect();
    let offsets: Vec<f64> = (0..channels).map(|_| rng.random_range(-25.0..25.0)).collect();
    let rect_level: Vec<f64> = (0..rects.len()).map(|_| rng.random_range(-50.0..50.0)).collect();

    let mut data = Vec::with_capacity(width * height * channels);
    for y in 0..height {
        for x in 0..width {
            let mut base = 128.0;
            for w in &waves {
                base += w[3] * (w[0] * x as f64 + w[1] * y as f64 + w[2]).sin();
            }
            for (r, lvl) in rects.iter().zip(&rect_level) {
                if (r[0]..r[2]).contains(&x) && (r[1]..r[3]).contains(&y) {
                    base += lvl;
                }
            }
            for off in &offsets {
                let grain = rng.random_range(-4.0..4.0);
                data.push((base + off + grain).round().clamp(0.0, 255.0) as u8);
            }
        }
    }
    Image::new(width, height, channels, data).unwrap()
}

/// Writes `count` textured images into `dir` and returns their file names.
pub fn write_corpus(dir: &Path, count: usize, size: usize, channels: usize, seed: u64) -> Vec<PathBuf> {
    (0..count)
        .map(|i| {
            let ext = if channels == 1 { "pgm" } else { "ppm" };
            let name = PathBuf::from(format!("img{i:02}.{ext}"));
            let img = textured_image(size, size, channels, seed.wrapping_add(i as u64));
            nlfilter::write_pnm(dir.join(&name), &img).unwrap();
            name
        })
        .collect()
}

/// Random 3x3 window with integer components in `0..=max`.
pub fn random_window(rng: &mut ChaCha8Rng, channels: usize, max: u8) -> (Window, Vec<Vec<i64>>) {
    let raw: Vec<Vec<i64>> = (0..9)
        .map(|_| (0..channels).map(|_| i64::from(rng.random_range(0..=max))).collect())
        .collect();
    let pixels = raw
        .iter()
        .map(|p| PixelVec::new(&p.iter().map(|&v| v as f64).collect::<Vec<_>>()))
        .collect();
    (Window::new(pixels, 3).unwrap(), raw)
}

/// Exhaustive vector-median search over integer points: summed Euclidean
/// distance per candidate, first minimum wins.
pub fn oracle_vmf(points: &[Vec<i64>]) -> usize {
    let mut best = (f64::INFINITY, 0);
    for (j, xj) in points.iter().enumerate() {
        let mut total = 0.0f64;
        for xi in points {
            let sq: i64 = xj.iter().zip(xi).map(|(a, b)| (a - b) * (a - b)).sum();
            total += (sq as f64).sqrt();
        }
        if total < best.0 {
            best = (total, j);
        }
    }
    best.1
}

/// Spatial depth of `points[j]` computed directly from integer coordinates.
pub fn oracle_depth(points: &[Vec<i64>], j: usize) -> f64 {
    let dims = points[j].len();
    let mut acc = vec![0.0f64; dims];
    for xi in points {
        let diff: Vec<i64> = points[j].iter().zip(xi).map(|(a, b)| a - b).collect();
        let sq: i64 = diff.iter().map(|d| d * d).sum();
        if sq == 0 {
            continue;
        }
        let norm = (sq as f64).sqrt();
        for (a, d) in acc.iter_mut().zip(&diff) {
            *a += *d as f64 / norm;
        }
    }
    let len = acc.iter().map(|v| v * v).sum::<f64>().sqrt();
    1.0 - len / (points.len() - 1) as f64
}

/// Exhaustive spatial-median search: first maximum depth wins.
pub fn oracle_smf(points: &[Vec<i64>]) -> usize {
    let mut best = (f64::NEG_INFINITY, 0);
    for j in 0..points.len() {
        let d = oracle_depth(points, j);
        if d > best.0 {
            best = (d, j);
        }
    }
    best.1
}

pub fn as_i64(p: &PixelVec) -> Vec<i64> {
    p.as_slice().iter().map(|&v| v as i64).collect()
}

/// 256x256 constant-128 gray image with impulses on even (x, y) sites,
/// alternating 0 and 255. Any 3x3 neighbourhood, including replicated
/// borders, holds at most 4 corrupted samples.
pub fn sparse_impulse_image() -> (Image, Image) {
    let clean = Image::filled(256, 256, 1, 128).unwrap();
    let mut data = clean.data().to_vec();
    for y in (0..256).step_by(2) {
        for x in (0..256).step_by(2) {
            data[y * 256 + x] = if (x / 2 + y / 2) % 2 == 0 { 0 } else { 255 };
        }
    }
    (clean, Image::new(256, 256, 1, data).unwrap())
}
