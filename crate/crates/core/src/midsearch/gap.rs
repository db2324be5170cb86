use serde::Serialize;

use super::midval::{cmidval, rmidval, Line, LineArms, MidValConfig};
use crate::empirical::EmpiricalMatrix;
use crate::game::{Entry, SamplingOracle};
use crate::{ceil_count, check_delta, AlgorithmError};

/// What a stage of the elimination loop did.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StageKind {
    /// Halved the active rows.
    Rows,
    /// Halved the active columns.
    Columns,
    /// Sampled the remaining (at most 2x2) submatrix and read off its saddle point.
    Terminal,
}

/// Record of one stage, kept for reporting.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageRecord {
    /// 1-based stage number.
    pub index: usize,
    pub kind: StageKind,
    /// Active rows and columns when the stage started (0-based).
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    /// Accuracy handed to the mid-value estimator; absent for terminal stages.
    pub epsilon: Option<f64>,
    /// The column (row stages) or row (column stages) used to rank the other side.
    pub pivot: Option<usize>,
    pub eliminated: Vec<usize>,
    pub samples: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapSearchOutcome {
    pub entry: Entry,
    /// The terminal submatrix had no empirical saddle point.
    pub degraded: bool,
    pub stages: Vec<StageRecord>,
    pub samples: u64,
}

/// Per-entry pulls of a row stage with `active` surviving rows:
/// `ceil((n+m-2)/active * 162 ln(4 n^2 m^2 / delta) / gap^2)`.
pub fn row_stage_pulls(
    n: usize,
    m: usize,
    active: usize,
    gap: f64,
    delta: f64,
) -> Result<u64, AlgorithmError> {
    let nm2 = (n as f64 * m as f64).powi(2);
    let scale = (n + m - 2) as f64 / active as f64;
    ceil_count(scale * 162.0 * (4.0 * nm2 / delta).ln() / (gap * gap))
}

/// Per-entry pulls of the terminal stage: `ceil((n+m-2)/2 * 50 ln(16/delta) / gap^2)`.
pub fn terminal_pulls(n: usize, m: usize, gap: f64, delta: f64) -> Result<u64, AlgorithmError> {
    ceil_count((n + m - 2) as f64 / 2.0 * 50.0 * (16.0 / delta).ln() / (gap * gap))
}

/// Failure probability handed to each mid-value call: `delta / (2 m^2 n^2)`.
pub fn midval_delta(n: usize, m: usize, delta: f64) -> f64 {
    delta / (2.0 * (n as f64 * m as f64).powi(2))
}

/// Accuracy of a mid-value call when `active` lines of the halved side remain.
pub fn stage_epsilon(n: usize, m: usize, active: usize, gap: f64) -> f64 {
    (active as f64 / (n + m - 2) as f64).sqrt() * gap / 9.0
}

/// Elimination search with a known gap guess.
///
/// While more than two rows or columns remain, the larger side is halved:
/// for rows, every active column gets a mid-value estimate over the active
/// rows, the column with the lowest estimate becomes the pivot, and the half
/// of the rows with the highest pivot-column means survives (columns are
/// symmetric, keeping the half with the lowest pivot-row means). The final
/// submatrix of at most 2x2 entries is sampled uniformly and its empirical
/// saddle point returned. If `gap` does not exceed the instance's harmonic
/// gap, the true equilibrium is returned with probability at least `1 - delta`.
///
/// Ties are broken toward the lowest index. A 1x1 matrix returns `(0, 0)`
/// without sampling.
pub fn find_psne_with_gap(
    oracle: &mut SamplingOracle,
    gap: f64,
    delta: f64,
) -> Result<GapSearchOutcome, AlgorithmError> {
    check_delta(delta)?;
    if !(gap > 0.0 && gap <= 2.0) {
        return Err(AlgorithmError::InvalidParameter(format!(
            "gap guess must lie in (0, 2], got {gap}"
        )));
    }
    let (n, m) = (oracle.rows(), oracle.cols());
    let start = oracle.total_count();
    if n == 1 && m == 1 {
        return Ok(GapSearchOutcome {
            entry: Entry::new(0, 0),
            degraded: false,
            stages: Vec::new(),
            samples: 0,
        });
    }

    let mut rows: Vec<usize> = (0..n).collect();
    let mut cols: Vec<usize> = (0..m).collect();
    let mut stages = Vec::new();
    let sub_delta = midval_delta(n, m, delta);

    while rows.len().max(cols.len()) > 2 {
        let before = oracle.total_count();
        let index = stages.len() + 1;
        let (kind, active) = if rows.len() >= cols.len() {
            (StageKind::Rows, rows.len())
        } else {
            (StageKind::Columns, cols.len())
        };
        let epsilon = stage_epsilon(n, m, active, gap);
        let config = MidValConfig::new(epsilon, sub_delta)?;
        let pulls = row_stage_pulls(n, m, active, gap, delta)?;

        let (pivot, eliminated) = if kind == StageKind::Rows {
            let mut values = Vec::with_capacity(cols.len());
            for &j in &cols {
                values.push(cmidval(
                    &mut LineArms::new(oracle, Line::Column(j), &rows),
                    &config,
                )?);
            }
            let j_hat = cols[argmin(&values)];
            let means = line_means(oracle, &rows, |i| (i, j_hat), pulls)?;
            let (kept, dropped) = keep_half(&rows, &means, true);
            rows = kept;
            (j_hat, dropped)
        } else {
            let mut values = Vec::with_capacity(rows.len());
            for &i in &rows {
                values.push(rmidval(
                    &mut LineArms::new(oracle, Line::Row(i), &cols),
                    &config,
                )?);
            }
            let i_hat = rows[argmax(&values)];
            let means = line_means(oracle, &cols, |j| (i_hat, j), pulls)?;
            let (kept, dropped) = keep_half(&cols, &means, false);
            cols = kept;
            (i_hat, dropped)
        };
        stages.push(StageRecord {
            index,
            kind,
            rows: Vec::new(),
            cols: Vec::new(),
            epsilon: Some(epsilon),
            pivot: Some(pivot),
            eliminated,
            samples: oracle.total_count() - before,
        });
    }
    fill_stage_sets(&mut stages, n, m);

    let before = oracle.total_count();
    let pulls = terminal_pulls(n, m, gap, delta)?;
    let mut table = EmpiricalMatrix::new(n, m);
    for &i in &rows {
        for &j in &cols {
            table.pull(oracle, i, j, pulls)?;
        }
    }
    let guess = table
        .guess_within(&rows, &cols)
        .expect("terminal stage samples every surviving entry");
    stages.push(StageRecord {
        index: stages.len() + 1,
        kind: StageKind::Terminal,
        rows: rows.clone(),
        cols: cols.clone(),
        epsilon: None,
        pivot: None,
        eliminated: Vec::new(),
        samples: oracle.total_count() - before,
    });

    Ok(GapSearchOutcome {
        entry: guess.entry,
        degraded: guess.degraded,
        stages,
        samples: oracle.total_count() - start,
    })
}

/// Reconstructs each stage's starting sets from the eliminations.
fn fill_stage_sets(stages: &mut [StageRecord], n: usize, m: usize) {
    let mut rows: Vec<usize> = (0..n).collect();
    let mut cols: Vec<usize> = (0..m).collect();
    for s in stages {
        s.rows = rows.clone();
        s.cols = cols.clone();
        match s.kind {
            StageKind::Rows => rows.retain(|i| !s.eliminated.contains(i)),
            StageKind::Columns => cols.retain(|j| !s.eliminated.contains(j)),
            StageKind::Terminal => {}
        }
    }
}

fn line_means(
    oracle: &mut SamplingOracle,
    members: &[usize],
    cell: impl Fn(usize) -> (usize, usize),
    pulls: u64,
) -> Result<Vec<f64>, AlgorithmError> {
    members
        .iter()
        .map(|&x| {
            let (i, j) = cell(x);
            Ok(oracle.sample_sum(i, j, pulls)? / pulls as f64)
        })
        .collect()
}

/// Index of the smallest value, lowest index on ties.
pub(crate) fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (k, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = k;
        }
    }
    best
}

/// Index of the largest value, lowest index on ties.
pub(crate) fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (k, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = k;
        }
    }
    best
}

/// Keeps `ceil(len/2)` members with the highest (or lowest) values, lowest
/// index first among ties. Returns `(kept, dropped)`, both ascending.
pub(crate) fn keep_half(
    members: &[usize],
    values: &[f64],
    highest: bool,
) -> (Vec<usize>, Vec<usize>) {
    let mut order: Vec<usize> = (0..members.len()).collect();
    if highest {
        order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    } else {
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    }
    let keep = members.len().div_ceil(2);
    let mut kept: Vec<usize> = order[..keep].iter().map(|&k| members[k]).collect();
    let mut dropped: Vec<usize> = order[keep..].iter().map(|&k| members[k]).collect();
    kept.sort_unstable();
    dropped.sort_unstable();
    (kept, dropped)
}
