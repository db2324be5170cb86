//! Running empirical means of matrix entries and the saddle-point rules
//! applied to them.

use crate::game::{Entry, GameError, SamplingOracle};
use crate::run::Guess;

/// Per-entry observation sums and counts.
#[derive(Debug, Clone)]
pub struct EmpiricalMatrix {
    rows: usize,
    cols: usize,
    sums: Vec<f64>,
    counts: Vec<u64>,
}

impl EmpiricalMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            sums: vec![0.0; rows * cols],
            counts: vec![0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn add(&mut self, row: usize, col: usize, sum: f64, pulls: u64) {
        let k = row * self.cols + col;
        self.sums[k] += sum;
        self.counts[k] += pulls;
    }

    /// Draws `pulls` fresh observations of `(row, col)` and records them.
    pub fn pull(
        &mut self,
        oracle: &mut SamplingOracle,
        row: usize,
        col: usize,
        pulls: u64,
    ) -> Result<(), GameError> {
        if pulls > 0 {
            let sum = oracle.sample_sum(row, col, pulls)?;
            self.add(row, col, sum, pulls);
        }
        Ok(())
    }

    pub fn count(&self, row: usize, col: usize) -> u64 {
        self.counts[row * self.cols + col]
    }

    pub fn mean(&self, row: usize, col: usize) -> Option<f64> {
        let k = row * self.cols + col;
        (self.counts[k] > 0).then(|| self.sums[k] / self.counts[k] as f64)
    }

    /// Saddle point of the full table; see [`guess_within`](Self::guess_within).
    pub fn guess(&self) -> Option<Guess> {
        let rows: Vec<usize> = (0..self.rows).collect();
        let cols: Vec<usize> = (0..self.cols).collect();
        self.guess_within(&rows, &cols)
    }

    /// Empirical PSNE of the submatrix `rows x cols`, using only entries that
    /// have been sampled.
    ///
    /// A sampled entry qualifies when its mean is the largest among sampled
    /// entries of its column and the smallest among sampled entries of its
    /// row; the first qualifying entry in the order of `rows` then `cols` wins.
    /// Without one, the fallback picks the sampled entry minimizing
    /// `(colmax_j - a) + (a - rowmin_i)` with the same tie order. Returns
    /// `None` only when nothing in the submatrix has been sampled.
    pub fn guess_within(&self, rows: &[usize], cols: &[usize]) -> Option<Guess> {
        let row_min: Vec<f64> = rows
            .iter()
            .map(|&i| {
                cols.iter()
                    .filter_map(|&j| self.mean(i, j))
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
        let col_max: Vec<f64> = cols
            .iter()
            .map(|&j| {
                rows.iter()
                    .filter_map(|&i| self.mean(i, j))
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .collect();

        let mut fallback: Option<(f64, Entry)> = None;
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                let Some(v) = self.mean(i, j) else { continue };
                if v == row_min[a] && v == col_max[b] {
                    return Some(Guess::firm(Entry::new(i, j)));
                }
                let violation = (col_max[b] - v) + (v - row_min[a]);
                if fallback.is_none_or(|(best, _)| violation < best) {
                    fallback = Some((violation, Entry::new(i, j)));
                }
            }
        }
        fallback.map(|(_, entry)| Guess {
            entry,
            degraded: true,
        })
    }
}
