//! Seeded multi-trial experiments producing checkpointed success curves.
//!
//! Trial `i` of an experiment with base seed `s` gives every algorithm a fresh
//! oracle seeded with `(s, i)`, so all algorithms face the same observation
//! stream and a trial's outcome does not depend on which worker ran it.
//! A guess counts as a success only when it is the exact equilibrium and not
//! a degraded fallback.

mod config;
mod report;
mod svg;
mod wilson;

use std::env;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{hardness_stats, psne_exact, Entry, GameError, GameMatrix, SamplingOracle};
use crate::instances::InstanceError;
use crate::run::{linear_grid, AlgorithmRun};
use crate::seed::OracleSeed;

pub use config::{
    AlgorithmSpec, BudgetSpec, ExperimentConfig, InstanceSpec, OutputSpec, DEFAULT_CHECKPOINTS,
};
pub use report::{emit_results, read_csv, write_csv, write_json, CSV_HEADER};
pub use svg::render_svg;
pub use wilson::wilson_ci;

/// Confidence level of the reported intervals.
pub const CONFIDENCE: f64 = 0.95;

/// Environment variable overriding the worker count.
pub const THREADS_ENV: &str = "MIDSEARCH_THREADS";

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid experiment config: {0}")]
    InvalidConfig(String),
    #[error("invalid counts: {successes} successes out of {trials} trials")]
    InvalidCounts { successes: u64, trials: u64 },
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
}

impl HarnessError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

/// The instance and budget an experiment runs on.
#[derive(Debug, Clone)]
pub struct PreparedExperiment {
    pub config: ExperimentConfig,
    pub matrix: Arc<GameMatrix>,
    /// The exact equilibrium, if the matrix has one.
    pub truth: Option<Entry>,
    pub budget_h1: Option<f64>,
    pub budget: u64,
    pub grid: Vec<u64>,
}

impl PreparedExperiment {
    pub fn new(config: ExperimentConfig) -> Result<Self, HarnessError> {
        config.validate()?;
        let matrix = config.instance.build()?;
        let truth = psne_exact(&matrix).map(|p| p.entry);
        let budget_h1 = hardness_stats(&matrix).ok().map(|h| h.budget_h1());
        let budget = config.budget.resolve(budget_h1)?;
        let grid = linear_grid(budget, config.checkpoints);
        Ok(Self {
            config,
            matrix: Arc::new(matrix),
            truth,
            budget_h1,
            budget,
            grid,
        })
    }

    /// Runs every algorithm once on trial `trial`'s observation stream.
    pub fn run_trial(&self, trial: u64) -> TrialRecord {
        let seed = OracleSeed::new(self.config.base_seed, trial);
        let runs = self
            .config
            .algorithms
            .iter()
            .map(|alg| {
                let mut oracle = SamplingOracle::new(Arc::clone(&self.matrix), seed);
                let start = Instant::now();
                let outcome = alg.run(&mut oracle, self.budget, &self.grid);
                AlgorithmTrial {
                    algorithm: alg.name().to_string(),
                    outcome: outcome.map_err(|e| e.to_string()),
                    seconds: start.elapsed().as_secs_f64(),
                }
            })
            .collect();
        TrialRecord { trial, runs }
    }
}

/// One algorithm's run on one trial.
#[derive(Debug, Clone)]
pub struct AlgorithmTrial {
    pub algorithm: String,
    pub outcome: Result<AlgorithmRun, String>,
    pub seconds: f64,
}

#[derive(Debug, Clone)]
pub struct TrialRecord {
    pub trial: u64,
    pub runs: Vec<AlgorithmTrial>,
}

/// One CSV row: an algorithm's success count at one checkpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub algorithm: String,
    pub checkpoint_samples: u64,
    pub successes: u64,
    /// Trials in which the algorithm ran without error.
    pub trials: u64,
    pub rate: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
    /// Mean over trials of the samples drawn by this checkpoint.
    pub mean_samples_used: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgorithmSummary {
    pub algorithm: String,
    pub errors: u64,
    /// Total time spent in this algorithm across trials.
    pub wall_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialError {
    pub algorithm: String,
    pub trial: u64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub rows: Vec<ResultRow>,
    pub n: usize,
    pub m: usize,
    pub psne: Option<Entry>,
    pub budget_h1: Option<f64>,
    pub budget: u64,
    pub trials: u64,
    pub base_seed: u64,
    pub algorithms: Vec<AlgorithmSummary>,
    pub errors: Vec<TrialError>,
    /// Elapsed time of the whole experiment.
    pub wall_time: f64,
}

impl ExperimentResult {
    /// Rows of one algorithm, in checkpoint order.
    pub fn rows_for<'a>(&'a self, algorithm: &'a str) -> impl Iterator<Item = &'a ResultRow> {
        self.rows.iter().filter(move |r| r.algorithm == algorithm)
    }

    /// The algorithm's row at the last checkpoint.
    pub fn final_row(&self, algorithm: &str) -> Option<&ResultRow> {
        self.rows.iter().rev().find(|r| r.algorithm == algorithm)
    }
}

/// Combines trial records into per-checkpoint counts. The records are sorted
/// by trial index first, so the result does not depend on their order.
pub fn aggregate(
    prepared: &PreparedExperiment,
    mut records: Vec<TrialRecord>,
    wall_time: f64,
) -> Result<ExperimentResult, HarnessError> {
    records.sort_by_key(|r| r.trial);
    let mut rows = Vec::new();
    let mut algorithms = Vec::new();
    let mut errors = Vec::new();
    for (k, alg) in prepared.config.algorithms.iter().enumerate() {
        let name = alg.name();
        let mut ok = Vec::new();
        let mut seconds = 0.0;
        for record in &records {
            let run = &record.runs[k];
            seconds += run.seconds;
            match &run.outcome {
                Ok(r) => ok.push(r),
                Err(message) => errors.push(TrialError {
                    algorithm: name.to_string(),
                    trial: record.trial,
                    message: message.clone(),
                }),
            }
        }
        let trials = ok.len() as u64;
        for (c, &point) in prepared.grid.iter().enumerate() {
            let successes = match prepared.truth {
                Some(truth) => ok
                    .iter()
                    .filter(|r| r.checkpoints.get(c).is_some_and(|cp| cp.identifies(truth)))
                    .count() as u64,
                None => 0,
            };
            let (rate, wilson_lo, wilson_hi, mean_samples_used) = if trials == 0 {
                (0.0, 0.0, 1.0, 0.0)
            } else {
                let (lo, hi) = wilson_ci(successes, trials, CONFIDENCE)?;
                let used: u64 = ok.iter().map(|r| r.samples_used.min(point)).sum();
                (
                    successes as f64 / trials as f64,
                    lo,
                    hi,
                    used as f64 / trials as f64,
                )
            };
            rows.push(ResultRow {
                algorithm: name.to_string(),
                checkpoint_samples: point,
                successes,
                trials,
                rate,
                wilson_lo,
                wilson_hi,
                mean_samples_used,
            });
        }
        algorithms.push(AlgorithmSummary {
            algorithm: name.to_string(),
            errors: records.len() as u64 - trials,
            wall_time: seconds,
        });
    }
    Ok(ExperimentResult {
        rows,
        n: prepared.matrix.rows(),
        m: prepared.matrix.cols(),
        psne: prepared.truth,
        budget_h1: prepared.budget_h1,
        budget: prepared.budget,
        trials: prepared.config.trials,
        base_seed: prepared.config.base_seed,
        algorithms,
        errors,
        wall_time,
    })
}

/// Worker count: `MIDSEARCH_THREADS` if set, else one per available core.
pub fn worker_threads() -> Result<usize, HarnessError> {
    match env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&t| t > 0)
            .ok_or_else(|| {
                HarnessError::InvalidConfig(format!(
                    "{THREADS_ENV} must be a positive integer, got {v:?}"
                ))
            }),
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

/// Runs all trials of `config` on a worker pool and aggregates them.
pub fn run_experiment(config: ExperimentConfig) -> Result<ExperimentResult, HarnessError> {
    run_experiment_with_threads(config, worker_threads()?)
}

pub fn run_experiment_with_threads(
    config: ExperimentConfig,
    threads: usize,
) -> Result<ExperimentResult, HarnessError> {
    let start = Instant::now();
    let prepared = PreparedExperiment::new(config)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| HarnessError::InvalidConfig(format!("cannot start worker pool: {e}")))?;
    let records: Vec<TrialRecord> = pool.install(|| {
        (0..prepared.config.trials)
            .into_par_iter()
            .map(|t| prepared.run_trial(t))
            .collect()
    });
    aggregate(&prepared, records, start.elapsed().as_secs_f64())
}
