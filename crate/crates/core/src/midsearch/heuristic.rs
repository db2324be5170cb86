use rand::seq::index;

use super::gap::{argmax, argmin, keep_half, StageKind, StageRecord};
use crate::empirical::EmpiricalMatrix;
use crate::game::{Entry, SamplingOracle};
use crate::run::{AlgorithmRun, Guess, Recorder};
use crate::AlgorithmError;

/// Shape of every stage of the halving loop on an `n x m` matrix, ending
/// with the terminal stage. The sequence does not depend on the data.
pub fn stage_plan(n: usize, m: usize) -> Vec<(StageKind, usize, usize)> {
    let (mut x, mut y) = (n, m);
    let mut plan = Vec::new();
    while x.max(y) > 2 {
        if x >= y {
            plan.push((StageKind::Rows, x, y));
            x = x.div_ceil(2);
        } else {
            plan.push((StageKind::Columns, x, y));
            y = y.div_ceil(2);
        }
    }
    plan.push((StageKind::Terminal, x, y));
    plan
}

/// Smallest budget the fixed-budget search accepts: one pull per surviving
/// entry in every stage.
pub fn heuristic_min_budget(n: usize, m: usize) -> u64 {
    if n == 1 && m == 1 {
        return 0;
    }
    stage_plan(n, m)
        .iter()
        .map(|&(_, x, y)| (x * y) as u64)
        .sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeuristicOutcome {
    pub run: AlgorithmRun,
    pub stages: Vec<StageRecord>,
    /// The gap the budget can resolve, `((n+m)/T)^(1/2)`.
    pub gap: f64,
}

/// Fixed-budget variant of the elimination search.
///
/// The stage sequence is the same as [`find_psne_with_gap`](super::find_psne_with_gap),
/// but every estimate is sized by the budget instead of a gap guess. Each
/// stage receives its minimum (one pull per active entry) plus a share of the
/// remaining slack, the terminal stage weighted twice; samples a stage leaves
/// unused pass to later stages. A halving stage spends half its budget
/// scanning for the pivot and half ranking along it. The scan of one line is
/// a successive-halving search for the rank `floor(len/3) + 1` order
/// statistic: each round pulls every candidate, then discards half of them
/// from both ends in proportion so the target rank stays inside. All means are
/// cumulative over the run.
///
/// The guess after each stage is the empirical saddle point of the surviving
/// submatrix. At most `budget` samples are drawn.
pub fn find_psne_heuristic(
    oracle: &mut SamplingOracle,
    budget: u64,
    grid: &[u64],
) -> Result<HeuristicOutcome, AlgorithmError> {
    let (n, m) = (oracle.rows(), oracle.cols());
    let gap = ((n + m) as f64 / budget as f64).sqrt();
    let required = heuristic_min_budget(n, m);
    if budget < required {
        return Err(AlgorithmError::BudgetTooSmall { budget, required });
    }
    let mut recorder = Recorder::new(grid);
    if n == 1 && m == 1 {
        let entry = Some(Guess::firm(Entry::new(0, 0)));
        return Ok(HeuristicOutcome {
            run: recorder.finish("midsearch", entry, 0),
            stages: Vec::new(),
            gap,
        });
    }

    let start = oracle.total_count();
    let plan = stage_plan(n, m);
    let mins: Vec<u64> = plan.iter().map(|&(_, x, y)| (x * y) as u64).collect();
    let weights: Vec<u64> = plan
        .iter()
        .map(|&(kind, _, _)| if kind == StageKind::Terminal { 2 } else { 1 })
        .collect();

    let mut table = EmpiricalMatrix::new(n, m);
    let mut rows: Vec<usize> = (0..n).collect();
    let mut cols: Vec<usize> = (0..m).collect();
    let mut guess = None;
    let mut stages = Vec::with_capacity(plan.len());

    for (t, &(kind, _, _)) in plan.iter().enumerate() {
        let used = oracle.total_count() - start;
        let remaining = budget - used;
        let rest_min: u64 = mins[t..].iter().sum();
        let rest_weight: u64 = weights[t..].iter().sum();
        let slack = (remaining - rest_min) as u128 * weights[t] as u128 / rest_weight as u128;
        let stage_budget = mins[t] + slack as u64;

        let before = oracle.total_count();
        let record_rows = rows.clone();
        let record_cols = cols.clone();
        let (pivot, eliminated) = match kind {
            StageKind::Rows => {
                let (pivot, kept, dropped) =
                    halve(oracle, &mut table, &rows, &cols, stage_budget, Side::Rows)?;
                rows = kept;
                (Some(pivot), dropped)
            }
            StageKind::Columns => {
                let (pivot, kept, dropped) = halve(
                    oracle,
                    &mut table,
                    &rows,
                    &cols,
                    stage_budget,
                    Side::Columns,
                )?;
                cols = kept;
                (Some(pivot), dropped)
            }
            StageKind::Terminal => {
                spread(oracle, &mut table, &rows, &cols, stage_budget)?;
                (None, Vec::new())
            }
        };
        let now = oracle.total_count();
        recorder.record_before(now - start, guess);
        guess = table.guess_within(&rows, &cols);
        recorder.record_through(now - start, guess);
        stages.push(StageRecord {
            index: t + 1,
            kind,
            rows: record_rows,
            cols: record_cols,
            epsilon: None,
            pivot,
            eliminated,
            samples: now - before,
        });
    }

    let used = oracle.total_count() - start;
    debug_assert!(used <= budget);
    Ok(HeuristicOutcome {
        run: recorder.finish("midsearch", guess, used),
        stages,
        gap,
    })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Rows,
    Columns,
}

/// One halving stage. Returns the pivot and the kept/dropped members of the
/// halved side.
fn halve(
    oracle: &mut SamplingOracle,
    table: &mut EmpiricalMatrix,
    rows: &[usize],
    cols: &[usize],
    budget: u64,
    side: Side,
) -> Result<(usize, Vec<usize>, Vec<usize>), AlgorithmError> {
    // Row stages scan columns over the active rows; column stages scan rows.
    let (halved, scanned) = match side {
        Side::Rows => (rows, cols),
        Side::Columns => (cols, rows),
    };
    let start = oracle.total_count();
    let pivot = if scanned.len() == 1 {
        scanned[0]
    } else {
        let per_line = (budget / 2) / scanned.len() as u64;
        let mut values = Vec::with_capacity(scanned.len());
        for &line in scanned {
            let cell = |x: usize| match side {
                Side::Rows => (x, line),
                Side::Columns => (line, x),
            };
            values.push(scan(
                oracle,
                table,
                halved,
                cell,
                per_line,
                side == Side::Rows,
            )?);
        }
        match side {
            Side::Rows => scanned[argmin(&values)],
            Side::Columns => scanned[argmax(&values)],
        }
    };
    let cell = |x: usize| match side {
        Side::Rows => (x, pivot),
        Side::Columns => (pivot, x),
    };
    let left = budget - (oracle.total_count() - start);
    let cells: Vec<(usize, usize)> = halved.iter().map(|&x| cell(x)).collect();
    pull_evenly(oracle, table, &cells, left)?;
    let means: Vec<f64> = cells
        .iter()
        .map(|&(i, j)| table.mean(i, j).expect("every pivot cell was pulled"))
        .collect();
    let (kept, dropped) = keep_half(halved, &means, side == Side::Rows);
    Ok((pivot, kept, dropped))
}

/// Successive-halving estimate of the `floor(len/3) + 1`-th highest
/// (`highest`) or lowest mean among `pool`, within `budget` pulls.
fn scan(
    oracle: &mut SamplingOracle,
    table: &mut EmpiricalMatrix,
    pool: &[usize],
    cell: impl Fn(usize) -> (usize, usize),
    budget: u64,
    highest: bool,
) -> Result<f64, AlgorithmError> {
    let mut pool: Vec<usize> = if (budget as usize) < pool.len() {
        let mut picked: Vec<usize> =
            index::sample(oracle.policy_rng(), pool.len(), budget as usize)
                .into_iter()
                .map(|k| pool[k])
                .collect();
        picked.sort_unstable();
        picked
    } else {
        pool.to_vec()
    };
    let mut target = pool.len() / 3; // 0-based rank
    let mut rounds = 1;
    let mut size = pool.len();
    while size > 2 {
        size = size.div_ceil(2);
        rounds += 1;
    }

    let mut left = budget;
    let mut ranked = Vec::new();
    for round in 0..rounds {
        let len = pool.len() as u64;
        if left < len && round > 0 {
            break;
        }
        let per_arm = (left / (rounds - round) as u64 / len).max(1);
        for &x in &pool {
            let (i, j) = cell(x);
            table.pull(oracle, i, j, per_arm)?;
        }
        left -= per_arm * pool.len() as u64;

        ranked = pool
            .iter()
            .map(|&x| {
                let (i, j) = cell(x);
                (x, table.mean(i, j).unwrap_or(0.0))
            })
            .collect::<Vec<_>>();
        if highest {
            ranked.sort_by(|a, b| b.1.total_cmp(&a.1));
        } else {
            ranked.sort_by(|a, b| a.1.total_cmp(&b.1));
        }
        if round + 1 == rounds {
            break;
        }
        let len = pool.len();
        let keep = len.div_ceil(2);
        let drop = len - keep;
        let top = target * drop / (len - 1);
        pool = ranked[top..top + keep].iter().map(|&(x, _)| x).collect();
        target -= top;
    }
    Ok(ranked[target.min(ranked.len() - 1)].1)
}

/// Pulls every cell `budget / cells.len()` times, the first `budget % len`
/// cells once more.
fn pull_evenly(
    oracle: &mut SamplingOracle,
    table: &mut EmpiricalMatrix,
    cells: &[(usize, usize)],
    budget: u64,
) -> Result<(), AlgorithmError> {
    let len = cells.len() as u64;
    let (per, extra) = (budget / len, budget % len);
    for (k, &(i, j)) in cells.iter().enumerate() {
        table.pull(oracle, i, j, per + u64::from((k as u64) < extra))?;
    }
    Ok(())
}

fn spread(
    oracle: &mut SamplingOracle,
    table: &mut EmpiricalMatrix,
    rows: &[usize],
    cols: &[usize],
    budget: u64,
) -> Result<(), AlgorithmError> {
    let cells: Vec<(usize, usize)> = rows
        .iter()
        .flat_map(|&i| cols.iter().map(move |&j| (i, j)))
        .collect();
    pull_evenly(oracle, table, &cells, budget)
}
