use serde::{Deserialize, Serialize};

use super::bai::{best_arm_identify, BaiAlgorithm};
use crate::game::{Entry, SamplingOracle};
use crate::midsearch::{Line, LineArms};
use crate::{ceil_count, check_delta, AlgorithmError};

/// Default budget constant of the acceptance test.
pub const DEFAULT_C1: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub c1: f64,
    pub bai: BaiAlgorithm,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            c1: DEFAULT_C1,
            bai: BaiAlgorithm::default(),
        }
    }
}

/// Sample cap of each of the two bandit runs:
/// `ceil(c1 * H * ln(max(e, ln H) / delta))` with `H = (n+m-2)/gap^2`, at least 1.
pub fn verify_cap(
    n: usize,
    m: usize,
    gap: f64,
    delta: f64,
    c1: f64,
) -> Result<u64, AlgorithmError> {
    let h = (n + m - 2) as f64 / (gap * gap);
    let inner = h.ln().max(std::f64::consts::E);
    Ok(ceil_count(c1 * h * (inner / delta).ln())?.max(1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Accepted,
    NotAccepted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VerifyOutcome {
    pub verdict: Verdict,
    pub cap: u64,
    /// Best row of the candidate column, if that run finished.
    pub row_best: Option<usize>,
    /// Best (lowest) column of the candidate row, if that run finished and was needed.
    pub col_best: Option<usize>,
    pub samples: u64,
}

impl VerifyOutcome {
    pub fn accepted(&self) -> bool {
        self.verdict == Verdict::Accepted
    }
}

/// Tests whether `candidate` is the equilibrium.
///
/// Runs best-arm identification on the rows of the candidate column, then on
/// the negated entries of the candidate row, each with fresh samples and the
/// cap from [`verify_cap`]. The candidate is accepted only if both runs finish
/// and return it. If `gap` is at most the instance's harmonic gap, the true
/// equilibrium is accepted with probability `1 - delta`, and any other entry
/// is rejected with probability `1 - delta`.
pub fn verify(
    oracle: &mut SamplingOracle,
    candidate: Entry,
    delta: f64,
    gap: f64,
    config: &VerifyConfig,
) -> Result<VerifyOutcome, AlgorithmError> {
    check_delta(delta)?;
    let (n, m) = (oracle.rows(), oracle.cols());
    if !oracle.matrix().contains(candidate.row, candidate.col) {
        return Err(crate::game::GameError::IndexOutOfRange {
            row: candidate.row,
            col: candidate.col,
            rows: n,
            cols: m,
        }
        .into());
    }
    let cap = verify_cap(n, m, gap, delta, config.c1)?;
    let all_rows: Vec<usize> = (0..n).collect();
    let all_cols: Vec<usize> = (0..m).collect();

    let first = best_arm_identify(
        &mut LineArms::new(oracle, Line::Column(candidate.col), &all_rows),
        cap,
        delta,
        config.bai,
    )?;
    let mut outcome = VerifyOutcome {
        verdict: Verdict::NotAccepted,
        cap,
        row_best: first.best,
        col_best: None,
        samples: first.samples,
    };
    if first.best != Some(candidate.row) {
        return Ok(outcome);
    }
    let second = best_arm_identify(
        &mut LineArms::new(oracle, Line::Row(candidate.row), &all_cols).negated(),
        cap,
        delta,
        config.bai,
    )?;
    outcome.col_best = second.best;
    outcome.samples += second.samples;
    if second.best == Some(candidate.col) {
        outcome.verdict = Verdict::Accepted;
    }
    Ok(outcome)
}
