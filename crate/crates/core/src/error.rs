use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid image: {0}")]
    InvalidImage(String),

    #[error("malformed PNM at byte {offset}: {reason}")]
    Pnm { offset: usize, reason: String },

    #[error("mask side must be odd and positive, got {0}")]
    InvalidMask(usize),

    #[error("pixel ({x}, {y}) is outside a {width}x{height} image")]
    OutOfBounds {
        x: usize,
        y: usize,
        width: usize,
        height: usize,
    },

    #[error("window needs at least 2 pixels for spatial depth, got {0}")]
    WindowTooSmall(usize),

    #[error("MSMF threshold T={t} must lie in 1..={n}")]
    InvalidThreshold { t: usize, n: usize },

    #[error("invalid noise parameter: {0}")]
    InvalidNoise(String),

    #[error("image shapes differ: {a:?} vs {b:?}")]
    DimensionMismatch {
        a: (usize, usize, usize),
        b: (usize, usize, usize),
    },

    #[error("MSE must be non-negative and finite, got {0}")]
    InvalidMse(f64),

    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },

    #[error("config line {line}: {reason}")]
    Config { line: usize, reason: String },

    #[error("no usable images in corpus")]
    EmptyCorpus,

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(what: &'static str, input: impl Into<String>) -> Self {
        Error::Parse {
            what,
            input: input.into(),
        }
    }
}
