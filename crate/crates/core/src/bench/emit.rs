//! CSV and plot-data output.
//!
//! Scores CSV: `image,noise,filter,mask,mse,psnr,wall_ms`, reals with six
//! decimals, `inf` for infinite PSNR, `wall_ms` empty unless timing was on.
//!
//! Summary CSV: `noise,filter,mask,mean_psnr,mean_mse,n,n_inf`.
//!
//! Plot data is JSON Lines, one object per (noise, metric) with the noises
//! in summary order and `psnr` before `mse`:
//!
//! ```text
//! {"noise":"sp:0.5:3","metric":"psnr","series":[{"filter":"mean","mask":3,"value":17.25},...]}
//! ```
//!
//! `value` is the summary mean rounded to six decimals, or `null` when every
//! image scored an infinite PSNR. The file depends only on the summary CSV,
//! see [`plot_data_from_summary_csv`].

use std::fs::File;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use super::{ScoreRow, Summary, SummaryRow};
use crate::error::{Error, Result};
use crate::filters::FilterId;

fn create(path: &Path) -> Result<File> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    File::create(path).map_err(|e| Error::io(path, e))
}

fn fixed6(v: f64) -> String {
    format!("{v:.6}")
}

fn round6(v: f64) -> f64 {
    fixed6(v).parse().expect("formatted float parses")
}

pub fn write_rows_csv(rows: &[ScoreRow], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(["image", "noise", "filter", "mask", "mse", "psnr", "wall_ms"])?;
    for r in rows {
        w.write_record([
            r.image.clone(),
            r.noise.clone(),
            r.filter.to_string(),
            r.mask.to_string(),
            fixed6(r.mse),
            format!("{:.6}", r.psnr),
            r.wall_time_ms.map(fixed6).unwrap_or_default(),
        ])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_summary_csv(summary: &Summary, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(["noise", "filter", "mask", "mean_psnr", "mean_mse", "n", "n_inf"])?;
    for r in &summary.rows {
        w.write_record([
            r.noise.clone(),
            r.filter.to_string(),
            r.mask.to_string(),
            r.mean_psnr.map(fixed6).unwrap_or_else(|| "inf".into()),
            fixed6(r.mean_mse),
            r.n.to_string(),
            r.n_inf.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Writes the per-cell rows to `csv_path` and the summary to `summary_path`.
pub fn emit_csv(
    rows: &[ScoreRow],
    summary: &Summary,
    csv_path: &Path,
    summary_path: &Path,
) -> Result<()> {
    write_rows_csv(rows, csv_path)?;
    write_summary_csv(summary, summary_path)
}

pub fn read_summary_csv(path: &Path) -> Result<Summary> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::Reader::from_reader(file);
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let field = |i: usize| rec.get(i).unwrap_or("");
        let bad = |what: &'static str, i: usize| Error::parse(what, field(i));
        if rec.len() != 7 {
            return Err(Error::parse("summary row", rec.iter().collect::<Vec<_>>().join(",")));
        }
        let mean_psnr = match field(3) {
            "inf" => None,
            v => Some(v.parse().map_err(|_| bad("mean_psnr", 3))?),
        };
        rows.push(SummaryRow {
            noise: field(0).to_string(),
            filter: field(1).parse::<FilterId>()?,
            mask: field(2).parse().map_err(|_| bad("mask", 2))?,
            mean_psnr,
            mean_mse: field(4).parse().map_err(|_| bad("mean_mse", 4))?,
            n: field(5).parse().map_err(|_| bad("n", 5))?,
            n_inf: field(6).parse().map_err(|_| bad("n_inf", 6))?,
        });
    }
    Ok(Summary { rows })
}

#[derive(Serialize)]
struct PlotRecord<'a> {
    noise: &'a str,
    metric: &'static str,
    series: Vec<PlotPoint>,
}

#[derive(Serialize)]
struct PlotPoint {
    filter: String,
    mask: usize,
    value: Option<f64>,
}

pub fn render_plot_data(summary: &Summary) -> String {
    let mut noises: Vec<&str> = Vec::new();
    for r in &summary.rows {
        if !noises.contains(&r.noise.as_str()) {
            noises.push(&r.noise);
        }
    }
    let mut out = String::new();
    for noise in noises {
        let members: Vec<&SummaryRow> = summary.rows.iter().filter(|r| r.noise == noise).collect();
        for metric in ["psnr", "mse"] {
            let series = members
                .iter()
                .map(|r| PlotPoint {
                    filter: r.filter.to_string(),
                    mask: r.mask,
                    value: match metric {
                        "psnr" => r.mean_psnr.map(round6),
                        _ => Some(round6(r.mean_mse)),
                    },
                })
                .collect();
            let rec = PlotRecord {
                noise,
                metric,
                series,
            };
            out.push_str(&serde_json::to_string(&rec).expect("plot record serializes"));
            out.push('\n');
        }
    }
    out
}

pub fn emit_plot_data(summary: &Summary, path: &Path) -> Result<()> {
    let mut f = create(path)?;
    f.write_all(render_plot_data(summary).as_bytes())
        .map_err(|e| Error::io(path, e))
}

/// Rebuilds the plot-data file from a summary CSV alone.
pub fn plot_data_from_summary_csv(summary_csv: &Path, out: &Path) -> Result<()> {
    emit_plot_data(&read_summary_csv(summary_csv)?, out)
}
