//! The hidden game: payoff matrix, noise, the counting sampling oracle, and
//! exact ground truth (equilibrium location and hardness).

mod file;
mod hardness;
mod matrix;
mod oracle;

use thiserror::Error;

pub use file::{InstanceFile, NoiseKind, NoiseSpec};
pub use hardness::{hardness_stats, psne_exact, HardnessStats, Psne, DUELING_TOL};
pub use matrix::{Entry, GameMatrix, NoiseModel};
pub use oracle::SamplingOracle;

#[derive(Debug, Error)]
pub enum GameError {
    #[error("matrix must have at least one row and one column")]
    EmptyMatrix,
    #[error("rows have different lengths")]
    RaggedRows,
    #[error("{len} entries cannot fill a {rows}x{cols} matrix")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        len: usize,
    },
    #[error("entry {entry} = {value} is outside the range allowed for {noise} noise")]
    EntryOutOfRange {
        entry: Entry,
        value: f64,
        noise: &'static str,
    },
    #[error("gaussian sigma must lie in [0, 1], got {0}")]
    InvalidSigma(f64),
    #[error("index ({row}, {col}) out of range for a {rows}x{cols} matrix (0-based)")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("sample count overflowed u64")]
    CountOverflow,
    #[error("an empirical mean needs at least one pull")]
    ZeroPulls,
    #[error("{}", match found {
        Some(e) => format!("equilibrium at {e} is not strict; gaps are undefined"),
        None => "matrix has no pure strategy Nash equilibrium".to_string(),
    })]
    NoStrictPsne { found: Option<Entry> },
    #[error("invalid instance file: {0}")]
    InvalidFile(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}
