use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: {what} (expected {expected}, got {got})")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("window [{start}, {start}+{k}) does not fit in {n} DFT outputs")]
    WindowOutOfRange { start: usize, k: usize, n: usize },

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("singular system (beta = {beta}); increase the dual variable")]
    SingularSystem { beta: f64 },

    #[error("power {power:.6e} W still exceeds budget {budget:.6e} W at beta_max = {beta_max:.6e}")]
    BracketFailure {
        beta_max: f64,
        power: f64,
        budget: f64,
    },

    #[error("effective channel is ill-conditioned (condition number {cond:.3e})")]
    IllConditioned { cond: f64 },

    #[error("exhaustive search over {count} assignments exceeds the limit of {limit}")]
    InstanceTooLarge { count: f64, limit: f64 },

    #[error("{path}:{line}: {msg}")]
    Config {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("{0}")]
    Validation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
