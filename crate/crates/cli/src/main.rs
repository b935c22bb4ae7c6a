//! `nlfilter` command-line tool: corrupt, denoise, evaluate, bench.
//!
//! Exit codes: 0 success, 1 usage error (nothing written), 2 I/O or data
//! error.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nlfilter::bench::{emit_csv, emit_plot_data, run_bench, BenchConfig};
use nlfilter::filters::DEFAULT_MASK;
use nlfilter::metrics::score;
use nlfilter::{apply_filter, read_pnm, write_pnm, BorderPolicy, FilterId, NoiseKind, NoiseSpec, Peak};

const OVERVIEW: &str = "\
Filters:
  mean        component-wise mean of the mask
  median      pixel with the median vector magnitude
  cmf         per-channel (component) median
  vmf         vector median: minimum summed distance to the mask
  smf         spatial median: maximum spatial depth
  msmf[:T]    modified spatial median: keep the centre when its depth rank is <= T,
              otherwise use the deepest pixel (default T=4)

Noise models (kind:param:seed, e.g. sp:0.5:42):
  gaussian    additive normal noise, param = variance on the [0,1] scale
  speckle     multiplicative uniform noise s + s*u, param = Var(u)
  sp          salt & pepper on whole pixels, param = density in [0,1]
  spc         salt & pepper on individual channels, param = density in [0,1]

Defaults: mask 3, border replicate (also reflect, zero), peak 256 (also 255), msmf T=4.
Images are binary PGM (P5) or PPM (P6) with maxval 255.
Exit codes: 0 success, 1 usage error, 2 I/O or data error.";

#[derive(Parser, Debug)]
#[command(name = "nlfilter", version, about = "Nonlinear image denoising filters and PSNR/MSE benchmark")]
#[command(after_help = OVERVIEW)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Add seeded noise to an image
    Corrupt(CorruptArgs),
    /// Filter an image with one of the six filters
    Denoise(DenoiseArgs),
    /// Print MSE and PSNR of a candidate against a reference
    Evaluate(EvaluateArgs),
    /// Run a benchmark grid described by a config file
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
struct CorruptArgs {
    #[arg(long = "in", value_name = "PNM")]
    input: PathBuf,
    #[arg(long = "out", value_name = "PNM")]
    output: PathBuf,
    /// Noise as kind:param[:seed] (gaussian, speckle, sp, spc)
    #[arg(long, value_name = "SPEC")]
    noise: String,
    /// Seed, required unless the noise spec carries one
    #[arg(long)]
    seed: Option<u64>,
    /// Hit individual channels instead of whole pixels (salt & pepper only)
    #[arg(long)]
    per_channel: bool,
}

#[derive(Args, Debug)]
struct DenoiseArgs {
    #[arg(long = "in", value_name = "PNM")]
    input: PathBuf,
    #[arg(long = "out", value_name = "PNM")]
    output: PathBuf,
    /// mean, median, cmf, vmf, smf or msmf[:T]
    #[arg(long, value_parser = parse_filter)]
    filter: FilterArg,
    /// Odd mask side
    #[arg(long, default_value_t = DEFAULT_MASK)]
    mask: usize,
    /// replicate, reflect or zero
    #[arg(long, default_value_t = BorderPolicy::Replicate)]
    border: BorderPolicy,
    /// MSMF depth-rank threshold
    #[arg(long = "T", value_name = "T")]
    threshold: Option<usize>,
}

#[derive(Args, Debug)]
struct EvaluateArgs {
    #[arg(long, value_name = "PNM")]
    reference: PathBuf,
    #[arg(long, value_name = "PNM")]
    candidate: PathBuf,
    /// PSNR peak value, 255 or 256
    #[arg(long, default_value_t = Peak::P256)]
    peak: Peak,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long, value_name = "FILE")]
    config: PathBuf,
    /// Override the worker thread count from the config (0 = one per core)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, Debug)]
struct FilterArg {
    id: FilterId,
    explicit_t: bool,
}

fn parse_filter(s: &str) -> Result<FilterArg, nlfilter::Error> {
    Ok(FilterArg {
        id: s.parse()?,
        explicit_t: s.contains(':'),
    })
}

enum Failure {
    Usage(String),
    Data(String),
}

impl From<nlfilter::Error> for Failure {
    fn from(e: nlfilter::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

fn same_file(a: &Path, b: &Path) -> bool {
    match (a.canonicalize(), b.canonicalize()) {
        (Ok(x), Ok(y)) => x == y,
        _ => a == b,
    }
}

fn corrupt(args: CorruptArgs) -> Result<(), Failure> {
    let mut spec = NoiseSpec::parse_with_seed(&args.noise, args.seed)
        .map_err(|e| Failure::Usage(format!("--noise: {e}; pass a seed as kind:param:seed or --seed")))?;
    if let Some(seed) = args.seed {
        if args.noise.split(':').count() == 3 && spec.seed != seed {
            return Err(Failure::Usage(format!(
                "--seed {seed} conflicts with the seed in --noise {}",
                args.noise
            )));
        }
    }
    if args.per_channel {
        match spec.kind {
            NoiseKind::SaltPepper | NoiseKind::SaltPepperPerChannel => {
                spec.kind = NoiseKind::SaltPepperPerChannel
            }
            _ => return Err(Failure::Usage("--per-channel applies to salt & pepper only".into())),
        }
    }
    if same_file(&args.input, &args.output) {
        return Err(Failure::Usage("--out must differ from --in".into()));
    }
    let img = read_pnm(&args.input)?;
    write_pnm(&args.output, &spec.corrupt(&img)?)?;
    Ok(())
}

fn denoise(args: DenoiseArgs) -> Result<(), Failure> {
    let filter = match (args.filter.id, args.threshold) {
        (FilterId::Msmf { threshold }, Some(t)) => {
            if args.filter.explicit_t && threshold != t {
                return Err(Failure::Usage(format!("--T {t} conflicts with --filter msmf:{threshold}")));
            }
            FilterId::Msmf { threshold: t }
        }
        (FilterId::Msmf { threshold }, None) => FilterId::Msmf { threshold },
        (other, Some(_)) => {
            return Err(Failure::Usage(format!("--T only applies to msmf, not {other}")))
        }
        (other, None) => other,
    };
    if args.mask == 0 || args.mask % 2 == 0 {
        return Err(Failure::Usage(format!("--mask must be odd and positive, got {}", args.mask)));
    }
    if let FilterId::Msmf { threshold } = filter {
        let n = args.mask * args.mask;
        if threshold == 0 || (args.mask > 1 && threshold > n) {
            return Err(Failure::Usage(format!("--T must lie in 1..={n}, got {threshold}")));
        }
        eprintln!("msmf: effective T={threshold}");
    }
    if same_file(&args.input, &args.output) {
        return Err(Failure::Usage("--out must differ from --in".into()));
    }
    let img = read_pnm(&args.input)?;
    let out = apply_filter(&img, filter, args.mask, args.border)?;
    write_pnm(&args.output, &out)?;
    Ok(())
}

fn evaluate(args: EvaluateArgs) -> Result<(), Failure> {
    let reference = read_pnm(&args.reference)?;
    let candidate = read_pnm(&args.candidate)?;
    let s = score(&reference, &candidate, args.peak)?;
    println!("mse={:.6} psnr={:.6}", s.mse, s.psnr);
    Ok(())
}

fn bench(args: BenchArgs) -> Result<(), Failure> {
    let mut cfg = BenchConfig::from_file(&args.config)?;
    if let Some(t) = args.threads {
        cfg.threads = t;
    }
    let out = run_bench(&cfg)?;
    for s in &out.skipped {
        eprintln!("skipped {}: {}", s.id, s.reason);
    }
    emit_csv(&out.rows, &out.summary, &cfg.csv_path, &cfg.summary_path)?;
    emit_plot_data(&out.summary, &cfg.plot_path)?;
    let mut stdout = std::io::stdout().lock();
    for r in &out.summary.rows {
        let psnr = r
            .mean_psnr
            .map(|v| format!("{v:.3}"))
            .unwrap_or_else(|| "inf".into());
        let _ = writeln!(
            stdout,
            "{:<22} {:<8} k={:<2} psnr={:<9} mse={:.3} n={}",
            r.noise, r.filter, r.mask, psnr, r.mean_mse, r.n
        );
    }
    eprintln!(
        "wrote {}, {}, {}",
        cfg.csv_path.display(),
        cfg.summary_path.display(),
        cfg.plot_path.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Corrupt(a) => corrupt(a),
        Command::Denoise(a) => denoise(a),
        Command::Evaluate(a) => evaluate(a),
        Command::Bench(a) => bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
