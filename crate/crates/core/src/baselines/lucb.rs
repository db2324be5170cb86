use crate::empirical::EmpiricalMatrix;
use crate::game::{Entry, SamplingOracle};
use crate::run::{AlgorithmRun, Guess, Recorder};
use crate::{check_delta, AlgorithmError};

/// Default confidence of LUCB-G.
pub const LUCB_DELTA: f64 = 0.1;

/// Confidence radius `sqrt(2 ln(4 n m s^2 / delta) / s)` of an entry sampled `s` times.
pub fn lucb_radius(n: usize, m: usize, s: u64, delta: f64) -> f64 {
    let s = s as f64;
    (2.0 * (4.0 * (n * m) as f64 * s * s / delta).ln() / s).sqrt()
}

struct State {
    table: EmpiricalMatrix,
    means: Vec<f64>,
    row_argmin: Vec<usize>,
    col_argmax: Vec<usize>,
}

impl State {
    fn mean(&self, i: usize, j: usize) -> f64 {
        self.means[i * self.table.cols() + j]
    }

    fn refresh(&mut self, i: usize, j: usize) {
        let (n, m) = (self.table.rows(), self.table.cols());
        self.means[i * m + j] = self.table.mean(i, j).unwrap_or(0.0);
        let mut best = 0;
        for c in 1..m {
            if self.mean(i, c) < self.mean(i, best) {
                best = c;
            }
        }
        self.row_argmin[i] = best;
        let mut best = 0;
        for r in 1..n {
            if self.mean(r, j) > self.mean(best, j) {
                best = r;
            }
        }
        self.col_argmax[j] = best;
    }

    /// Empirical saddle point, or the maximin entry if there is none.
    fn candidate(&self) -> Entry {
        for (i, &j) in self.row_argmin.iter().enumerate() {
            if self.col_argmax[j] == i {
                return Entry::new(i, j);
            }
        }
        let mut best = 0;
        for i in 1..self.row_argmin.len() {
            if self.mean(i, self.row_argmin[i]) > self.mean(best, self.row_argmin[best]) {
                best = i;
            }
        }
        Entry::new(best, self.row_argmin[best])
    }
}

/// LUCB-style confidence-bound search over entries.
///
/// After one pass over the matrix, each round takes the empirical saddle
/// point (or the maximin entry) as the candidate, then samples it, the row
/// with the highest upper bound in its column, and the column with the lowest
/// lower bound in its row. The run stops once the candidate's lower bound is
/// above every other upper bound in its column and its upper bound is below
/// every other lower bound in its row. If the budget runs out first, the
/// guess is the empirical saddle point (or the fallback entry).
pub fn run_lucb_g(
    oracle: &mut SamplingOracle,
    budget: u64,
    delta: f64,
    grid: &[u64],
) -> Result<AlgorithmRun, AlgorithmError> {
    check_delta(delta)?;
    let (n, m) = (oracle.rows(), oracle.cols());
    let required = (n * m) as u64;
    if budget < required {
        return Err(AlgorithmError::BudgetTooSmall { budget, required });
    }
    let start = oracle.total_count();
    let mut recorder = Recorder::new(grid);
    let mut s = State {
        table: EmpiricalMatrix::new(n, m),
        means: vec![0.0; n * m],
        row_argmin: vec![0; n],
        col_argmax: vec![0; m],
    };
    let mut used = 0u64;
    let mut next = recorder.next_point();

    let mut pull =
        |s: &mut State, oracle: &mut SamplingOracle, i: usize, j: usize, refresh: bool| {
            let x = oracle.sample(i, j)?;
            s.table.add(i, j, x, 1);
            if refresh {
                s.refresh(i, j);
            }
            used += 1;
            if next == Some(used) {
                recorder.record_through(used, s.table.guess());
                next = recorder.next_point();
            }
            Ok::<u64, AlgorithmError>(used)
        };

    for i in 0..n {
        for j in 0..m {
            pull(&mut s, oracle, i, j, false)?;
        }
    }
    for i in 0..n {
        for j in 0..m {
            s.means[i * m + j] = s.table.mean(i, j).unwrap_or(0.0);
        }
    }
    for i in 0..n {
        s.refresh(i, 0);
    }
    for j in 0..m {
        s.refresh(0, j);
    }

    let ucb = |s: &State, i: usize, j: usize| {
        s.mean(i, j) + lucb_radius(n, m, s.table.count(i, j), delta)
    };
    let lcb = |s: &State, i: usize, j: usize| {
        s.mean(i, j) - lucb_radius(n, m, s.table.count(i, j), delta)
    };

    let mut certified = None;
    let mut used_now = required;
    'outer: while used_now < budget {
        let c = s.candidate();
        let challenger_row = (0..n).filter(|&i| i != c.row).max_by(|&a, &b| {
            ucb(&s, a, c.col)
                .total_cmp(&ucb(&s, b, c.col))
                .then(b.cmp(&a))
        });
        let challenger_col = (0..m).filter(|&j| j != c.col).min_by(|&a, &b| {
            lcb(&s, c.row, a)
                .total_cmp(&lcb(&s, c.row, b))
                .then(a.cmp(&b))
        });
        let row_ok = challenger_row.is_none_or(|i| lcb(&s, c.row, c.col) > ucb(&s, i, c.col));
        let col_ok = challenger_col.is_none_or(|j| ucb(&s, c.row, c.col) < lcb(&s, c.row, j));
        if row_ok && col_ok {
            certified = Some(c);
            break;
        }
        let cells = [
            Some((c.row, c.col)),
            challenger_row.map(|i| (i, c.col)),
            challenger_col.map(|j| (c.row, j)),
        ];
        for (i, j) in cells.into_iter().flatten() {
            if used_now >= budget {
                break 'outer;
            }
            used_now = pull(&mut s, oracle, i, j, true)?;
        }
    }

    let used = oracle.total_count() - start;
    let guess = match certified {
        Some(c) => Some(Guess::firm(c)),
        None => s.table.guess(),
    };
    Ok(recorder.finish("lucb-g", guess, used))
}
