use std::fmt;

use serde::{Deserialize, Serialize};

use super::GameError;

/// A cell of the payoff matrix, stored 0-based and displayed 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Entry {
    pub row: usize,
    pub col: usize,
}

impl Entry {
    pub const fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }

    /// Builds an entry from 1-based indices as printed in reports.
    pub fn from_one_based(row: usize, col: usize) -> Option<Self> {
        (row >= 1 && col >= 1).then(|| Self::new(row - 1, col - 1))
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.row + 1, self.col + 1)
    }
}

/// Observation noise added to every query of the matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseModel {
    /// `A[i][j] + sigma * N(0, 1)`; `sigma <= 1` keeps the 1-sub-Gaussian contract.
    Gaussian { sigma: f64 },
    /// A query returns 1 with probability `A[i][j]` and 0 otherwise.
    Bernoulli,
    /// Noiseless queries.
    Zero,
}

impl NoiseModel {
    pub const fn standard_gaussian() -> Self {
        NoiseModel::Gaussian { sigma: 1.0 }
    }

    pub fn name(&self) -> &'static str {
        match self {
            NoiseModel::Gaussian { .. } => "gaussian",
            NoiseModel::Bernoulli => "bernoulli",
            NoiseModel::Zero => "zero",
        }
    }

    /// Smallest `s` such that an observation minus its mean is `s`-sub-Gaussian.
    pub fn sub_gaussian_scale(&self) -> f64 {
        match *self {
            NoiseModel::Gaussian { sigma } => sigma,
            NoiseModel::Bernoulli => 0.5,
            NoiseModel::Zero => 0.0,
        }
    }
}

impl fmt::Display for NoiseModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NoiseModel::Gaussian { sigma } => write!(f, "gaussian(sigma={sigma})"),
            other => f.write_str(other.name()),
        }
    }
}

/// The hidden payoff matrix `A` in `[-1, 1]^{n x m}` together with its noise model.
///
/// The row player maximizes and the column player minimizes, so a pure
/// equilibrium is an entry that is the largest in its column and the smallest
/// in its row.
#[derive(Debug, Clone, PartialEq)]
pub struct GameMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
    noise: NoiseModel,
    tags: Vec<String>,
}

impl GameMatrix {
    /// Builds a matrix from row vectors, validating shape, range and noise constraints.
    pub fn new(rows: Vec<Vec<f64>>, noise: NoiseModel) -> Result<Self, GameError> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(GameError::RaggedRows);
        }
        Self::from_row_major(n, m, rows.into_iter().flatten().collect(), noise)
    }

    pub fn from_row_major(
        rows: usize,
        cols: usize,
        entries: Vec<f64>,
        noise: NoiseModel,
    ) -> Result<Self, GameError> {
        if rows == 0 || cols == 0 {
            return Err(GameError::EmptyMatrix);
        }
        if entries.len() != rows * cols {
            return Err(GameError::ShapeMismatch {
                rows,
                cols,
                len: entries.len(),
            });
        }
        match noise {
            NoiseModel::Gaussian { sigma } if !(0.0..=1.0).contains(&sigma) => {
                return Err(GameError::InvalidSigma(sigma));
            }
            _ => {}
        }
        let (lo, hi) = match noise {
            NoiseModel::Bernoulli => (0.0, 1.0),
            _ => (-1.0, 1.0),
        };
        for (idx, &value) in entries.iter().enumerate() {
            if !(lo..=hi).contains(&value) {
                return Err(GameError::EntryOutOfRange {
                    entry: Entry::new(idx / cols, idx % cols),
                    value,
                    noise: noise.name(),
                });
            }
        }
        Ok(Self {
            rows,
            cols,
            entries,
            noise,
            tags: Vec::new(),
        })
    }

    pub fn with_tags<I, S>(mut self, tags: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.tags = tags.into_iter().map(Into::into).collect();
        self
    }

    /// Replaces the noise model, re-checking the entry range it requires.
    pub fn with_noise(self, noise: NoiseModel) -> Result<Self, GameError> {
        let tags = self.tags;
        Ok(Self::from_row_major(self.rows, self.cols, self.entries, noise)?.with_tags(tags))
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.cols + col]
    }

    pub fn at(&self, entry: Entry) -> f64 {
        self.get(entry.row, entry.col)
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> impl Iterator<Item = f64> + '_ {
        (0..self.rows).map(move |i| self.get(i, col))
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn noise(&self) -> NoiseModel {
        self.noise
    }

    pub fn tags(&self) -> &[String] {
        &self.tags
    }

    pub fn has_tag(&self, tag: &str) -> bool {
        self.tags.iter().any(|t| t == tag)
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        row < self.rows && col < self.cols
    }

    /// True when the matrix is square with `P[i][j] + P[j][i] = 1` within `tol`.
    pub fn is_dueling(&self, tol: f64) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (i..self.cols).all(|j| (self.get(i, j) + self.get(j, i) - 1.0).abs() <= tol)
            })
    }
}
