//! Corpus benchmark: corrupt each clean image, filter it, score the result
//! against the clean original.
//!
//! Every (image, noise) pair is one job. Its noise stream is derived from
//! the master seed, the image id and the noise spec string, so results do not
//! depend on corpus order or thread count. All filters and mask sizes of a
//! job consume the same corrupted image.

mod config;
mod emit;

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::filters::{apply_filter, FilterId};
use crate::image::Image;
use crate::metrics::{score, Psnr};
use crate::noise::{NoiseSpec, RngStream};
use crate::pnm::read_pnm;

pub use config::{BenchConfig, CorpusEntry};
pub use emit::{
    emit_csv, emit_plot_data, plot_data_from_summary_csv, read_summary_csv, render_plot_data,
    write_rows_csv, write_summary_csv,
};

/// One scored (image, noise, filter, mask) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreRow {
    pub image: String,
    pub noise: String,
    pub filter: FilterId,
    pub mask: usize,
    pub mse: f64,
    pub psnr: Psnr,
    /// Present only when timing is enabled.
    pub wall_time_ms: Option<f64>,
    /// SHA-256 of the corrupted image the filter consumed.
    pub input_digest: [u8; 32],
}

impl ScoreRow {
    fn sort_key(&self) -> (&str, &str, FilterId, usize) {
        (&self.image, &self.noise, self.filter, self.mask)
    }
}

/// Aggregate over the corpus for one (noise, filter, mask) condition.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub noise: String,
    pub filter: FilterId,
    pub mask: usize,
    /// Mean of the finite per-image PSNRs; `None` when every image scored
    /// infinite.
    pub mean_psnr: Option<f64>,
    pub mean_mse: f64,
    /// Images aggregated.
    pub n: usize,
    /// Images with infinite PSNR, left out of `mean_psnr`.
    pub n_inf: usize,
}

/// Summary rows ordered by (noise, filter, mask).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Summary {
    pub rows: Vec<SummaryRow>,
}

impl Summary {
    /// Means of PSNR and MSE taken independently per condition.
    pub fn from_rows(rows: &[ScoreRow]) -> Self {
        let mut groups: BTreeMap<(&str, FilterId, usize), Vec<&ScoreRow>> = BTreeMap::new();
        for r in rows {
            groups
                .entry((r.noise.as_str(), r.filter, r.mask))
                .or_default()
                .push(r);
        }
        let rows = groups
            .into_iter()
            .map(|((noise, filter, mask), mut members)| {
                members.sort_by(|a, b| a.image.cmp(&b.image));
                let n = members.len();
                let finite: Vec<f64> = members.iter().filter_map(|r| r.psnr.finite()).collect();
                let mean_psnr = if finite.is_empty() {
                    None
                } else {
                    Some(finite.iter().sum::<f64>() / finite.len() as f64)
                };
                let mean_mse = members.iter().map(|r| r.mse).sum::<f64>() / n as f64;
                SummaryRow {
                    noise: noise.to_string(),
                    filter,
                    mask,
                    mean_psnr,
                    mean_mse,
                    n,
                    n_inf: n - finite.len(),
                }
            })
            .collect();
        Summary { rows }
    }

    pub fn get(&self, noise: &str, filter: FilterId, mask: usize) -> Option<&SummaryRow> {
        self.rows
            .iter()
            .find(|r| r.noise == noise && r.filter == filter && r.mask == mask)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedImage {
    pub id: String,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct BenchOutcome {
    /// Sorted by (image, noise, filter, mask).
    pub rows: Vec<ScoreRow>,
    pub summary: Summary,
    /// Corpus entries that could not be read or decoded.
    pub skipped: Vec<SkippedImage>,
}

/// The stream used to corrupt image `image_id` with `noise`.
pub fn job_stream(master_seed: u64, image_id: &str, noise: &NoiseSpec) -> RngStream {
    RngStream::derived(master_seed, &[image_id, &noise.to_string()])
}

/// Corrupted input for one job, exactly as the runner produces it.
pub fn corrupt_for_job(
    clean: &Image,
    master_seed: u64,
    image_id: &str,
    noise: &NoiseSpec,
) -> Result<Image> {
    noise.apply(clean, &mut job_stream(master_seed, image_id, noise))
}

pub fn run_bench(cfg: &BenchConfig) -> Result<BenchOutcome> {
    cfg.validate()?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if cfg.threads > 0 {
        pool = pool.num_threads(cfg.threads);
    }
    let pool = pool.build().map_err(|e| Error::Config {
        line: 0,
        reason: format!("cannot start worker pool: {e}"),
    })?;
    pool.install(|| run_in_pool(cfg))
}

fn run_in_pool(cfg: &BenchConfig) -> Result<BenchOutcome> {
    let loaded: Vec<(usize, std::result::Result<Image, String>)> = cfg
        .corpus
        .par_iter()
        .enumerate()
        .map(|(i, e)| (i, read_pnm(&e.path).map_err(|err| err.to_string())))
        .collect();

    let mut images = Vec::new();
    let mut skipped = Vec::new();
    for (i, res) in loaded {
        let id = &cfg.corpus[i].id;
        match res {
            Ok(img) => images.push((id.as_str(), img)),
            Err(reason) => skipped.push(SkippedImage {
                id: id.clone(),
                reason,
            }),
        }
    }
    if images.is_empty() {
        return Err(Error::EmptyCorpus);
    }

    let jobs: Vec<(usize, usize)> = (0..images.len())
        .flat_map(|i| (0..cfg.noise_specs.len()).map(move |j| (i, j)))
        .collect();

    let per_job: Vec<Vec<ScoreRow>> = jobs
        .par_iter()
        .map(|&(i, j)| {
            let (id, clean) = &images[i];
            run_job(cfg, id, clean, &cfg.noise_specs[j])
        })
        .collect::<Result<_>>()?;

    let mut rows: Vec<ScoreRow> = per_job.into_iter().flatten().collect();
    rows.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    let summary = Summary::from_rows(&rows);
    Ok(BenchOutcome {
        rows,
        summary,
        skipped,
    })
}

fn run_job(cfg: &BenchConfig, id: &str, clean: &Image, noise: &NoiseSpec) -> Result<Vec<ScoreRow>> {
    let noisy = corrupt_for_job(clean, cfg.master_seed, id, noise)?;
    let digest: [u8; 32] = Sha256::digest(noisy.data()).into();
    let noise_label = noise.to_string();
    let mut rows = Vec::with_capacity(cfg.filters.len() * cfg.mask_sizes.len());
    for &filter in &cfg.filters {
        for &mask in &cfg.mask_sizes {
            let started = Instant::now();
            let restored = apply_filter(&noisy, filter, mask, cfg.border)?;
            let s = score(clean, &restored, cfg.peak)?;
            let elapsed = started.elapsed().as_secs_f64() * 1e3;
            rows.push(ScoreRow {
                image: id.to_string(),
                noise: noise_label.clone(),
                filter,
                mask,
                mse: s.mse,
                psnr: s.psnr,
                wall_time_ms: cfg.timing.then_some(elapsed),
                input_digest: digest,
            });
        }
    }
    Ok(rows)
}
