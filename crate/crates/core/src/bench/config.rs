//! Benchmark configuration and its flat `key = value` file format.
//!
//! ```text
//! # lines starting with '#' are comments; blank lines are ignored
//! corpus  = images/a.pgm, images/b.ppm     # required
//! noise   = gaussian:0.5:1, speckle:0.5:2, sp:0.5:3   # required
//! filters = mean, median, cmf, vmf, smf, msmf:4       # default: all six
//! masks   = 3, 5                                       # default: 3
//! border  = replicate                                  # replicate | reflect | zero
//! seed    = 7                                          # required
//! peak    = 256                                        # 255 | 256
//! csv     = out/scores.csv                             # required
//! summary = out/summary.csv      # default: <csv stem>.summary.csv
//! plot    = out/plot.jsonl       # default: <csv stem>.plot.jsonl
//! threads = 0                    # 0 = one per core
//! timing  = false                # fill the wall_ms column
//! ```
//!
//! List values are comma separated. A `#` after whitespace starts a trailing
//! comment. Relative paths resolve against the config file's directory.
//! Unknown or repeated keys are errors.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::filters::FilterId;
use crate::image::BorderPolicy;
use crate::metrics::Peak;
use crate::noise::NoiseSpec;

/// One corpus image: `id` labels it in the output, `path` locates it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub id: String,
    pub path: PathBuf,
}

impl CorpusEntry {
    /// Entry whose id is the path as written.
    pub fn from_path(path: impl Into<PathBuf>) -> Self {
        let path = path.into();
        CorpusEntry {
            id: path.display().to_string(),
            path,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub corpus: Vec<CorpusEntry>,
    pub noise_specs: Vec<NoiseSpec>,
    pub filters: Vec<FilterId>,
    pub mask_sizes: Vec<usize>,
    pub border: BorderPolicy,
    pub master_seed: u64,
    pub peak: Peak,
    pub csv_path: PathBuf,
    pub summary_path: PathBuf,
    pub plot_path: PathBuf,
    /// Worker threads; 0 lets rayon pick.
    pub threads: usize,
    /// Record per-cell wall time. Off by default so output bytes are
    /// reproducible.
    pub timing: bool,
}

impl BenchConfig {
    /// Config with defaults for everything except the corpus, noise list,
    /// seed and CSV path. Summary and plot paths derive from `csv_path`.
    pub fn new(
        corpus: Vec<CorpusEntry>,
        noise_specs: Vec<NoiseSpec>,
        master_seed: u64,
        csv_path: impl Into<PathBuf>,
    ) -> Self {
        let csv_path = csv_path.into();
        BenchConfig {
            corpus,
            noise_specs,
            filters: FilterId::ALL.to_vec(),
            mask_sizes: vec![crate::filters::DEFAULT_MASK],
            border: BorderPolicy::default(),
            master_seed,
            peak: Peak::default(),
            summary_path: sibling(&csv_path, "summary.csv"),
            plot_path: sibling(&csv_path, "plot.jsonl"),
            csv_path,
            threads: 0,
            timing: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |reason: &str| Error::Config {
            line: 0,
            reason: reason.to_string(),
        };
        if self.corpus.is_empty() {
            return Err(invalid("corpus is empty"));
        }
        if self.noise_specs.is_empty() {
            return Err(invalid("noise list is empty"));
        }
        if self.filters.is_empty() {
            return Err(invalid("filter list is empty"));
        }
        if self.mask_sizes.is_empty() {
            return Err(invalid("mask list is empty"));
        }
        for spec in &self.noise_specs {
            spec.validate()?;
        }
        for &k in &self.mask_sizes {
            crate::image::validate_side(k)?;
            for f in &self.filters {
                if let FilterId::Msmf { threshold } = *f {
                    if k > 1 && threshold > k * k {
                        return Err(Error::InvalidThreshold {
                            t: threshold,
                            n: k * k,
                        });
                    }
                }
            }
        }
        let mut ids = HashSet::new();
        for e in &self.corpus {
            if !ids.insert(e.id.as_str()) {
                return Err(invalid(&format!("duplicate corpus entry {}", e.id)));
            }
        }
        Ok(())
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new(""));
        BenchConfig::parse(&text, base)
    }

    /// Parses config text; relative paths are joined onto `base_dir`.
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut corpus = None;
        let mut noise = None;
        let mut filters = None;
        let mut masks = None;
        let mut border = None;
        let mut seed = None;
        let mut peak = None;
        let mut csv = None;
        let mut summary = None;
        let mut plot = None;
        let mut threads = None;
        let mut timing = None;

        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |reason: String| Error::Config { line, reason };
            let content = strip_comment(raw).trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| err(format!("expected key = value, got {content:?}")))?;
            let key = key.trim();
            let value = value.trim();
            if !seen.insert(key.to_string()) {
                return Err(err(format!("key {key:?} given twice")));
            }
            let wrap = |e: Error| err(e.to_string());
            match key {
                "corpus" => {
                    corpus = Some(
                        list(value)
                            .map(|p| CorpusEntry {
                                id: p.to_string(),
                                path: base_dir.join(p),
                            })
                            .collect::<Vec<_>>(),
                    )
                }
                "noise" => {
                    noise = Some(
                        list(value)
                            .map(str::parse)
                            .collect::<Result<Vec<NoiseSpec>>>()
                            .map_err(wrap)?,
                    )
                }
                "filters" => {
                    filters = Some(
                        list(value)
                            .map(str::parse)
                            .collect::<Result<Vec<FilterId>>>()
                            .map_err(wrap)?,
                    )
                }
                "masks" => {
                    masks = Some(
                        list(value)
                            .map(|v| {
                                v.parse::<usize>()
                                    .map_err(|_| err(format!("bad mask size {v:?}")))
                            })
                            .collect::<Result<Vec<_>>>()?,
                    )
                }
                "border" => border = Some(value.parse::<BorderPolicy>().map_err(wrap)?),
                "seed" => {
                    seed = Some(
                        value
                            .parse::<u64>()
                            .map_err(|_| err(format!("bad seed {value:?}")))?,
                    )
                }
                "peak" => peak = Some(value.parse::<Peak>().map_err(wrap)?),
                "csv" => csv = Some(base_dir.join(value)),
                "summary" => summary = Some(base_dir.join(value)),
                "plot" => plot = Some(base_dir.join(value)),
                "threads" => {
                    threads = Some(
                        value
                            .parse::<usize>()
                            .map_err(|_| err(format!("bad thread count {value:?}")))?,
                    )
                }
                "timing" => {
                    timing = Some(match value {
                        "true" => true,
                        "false" => false,
                        _ => return Err(err(format!("timing must be true or false, got {value:?}"))),
                    })
                }
                other => return Err(err(format!("unknown key {other:?}"))),
            }
        }

        let missing = |key: &str| Error::Config {
            line: 0,
            reason: format!("missing required key {key:?}"),
        };
        let mut cfg = BenchConfig::new(
            corpus.ok_or_else(|| missing("corpus"))?,
            noise.ok_or_else(|| missing("noise"))?,
            seed.ok_or_else(|| missing("seed"))?,
            csv.ok_or_else(|| missing("csv"))?,
        );
        if let Some(f) = filters {
            cfg.filters = f;
        }
        if let Some(m) = masks {
            cfg.mask_sizes = m;
        }
        if let Some(b) = border {
            cfg.border = b;
        }
        if let Some(p) = peak {
            cfg.peak = p;
        }
        if let Some(s) = summary {
            cfg.summary_path = s;
        }
        if let Some(p) = plot {
            cfg.plot_path = p;
        }
        if let Some(t) = threads {
            cfg.threads = t;
        }
        if let Some(t) = timing {
            cfg.timing = t;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn strip_comment(line: &str) -> &str {
    if line.trim_start().starts_with('#') {
        return "";
    }
    let bytes = line.as_bytes();
    for i in 1..bytes.len() {
        if bytes[i] == b'#' && bytes[i - 1].is_ascii_whitespace() {
            return &line[..i];
        }
    }
    line
}

fn list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn sibling(csv: &Path, suffix: &str) -> PathBuf {
    let stem = csv
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "bench".into());
    csv.with_file_name(format!("{stem}.{suffix}"))
}
