use serde::Serialize;

use super::{Entry, GameError, GameMatrix};

/// Tolerance for the skew condition `P[i][j] + P[j][i] = 1` of dueling matrices.
pub const DUELING_TOL: f64 = 1e-12;

/// Location of a pure strategy Nash equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Psne {
    pub entry: Entry,
    /// The entry is strictly larger than every other entry of its column and
    /// strictly smaller than every other entry of its row.
    pub strict: bool,
}

/// Exact (noise-free) equilibrium check: an entry that is a maximum of its
/// column and a minimum of its row.
///
/// When several saddle points exist (only possible with ties) the lowest
/// row-major one is returned and reported as non-strict.
pub fn psne_exact(matrix: &GameMatrix) -> Option<Psne> {
    let (n, m) = (matrix.rows(), matrix.cols());
    let row_min: Vec<f64> = (0..n)
        .map(|i| matrix.row(i).iter().copied().fold(f64::INFINITY, f64::min))
        .collect();
    let col_max: Vec<f64> = (0..m)
        .map(|j| matrix.column(j).fold(f64::NEG_INFINITY, f64::max))
        .collect();

    let mut saddles = (0..n)
        .flat_map(|i| (0..m).map(move |j| Entry::new(i, j)))
        .filter(|e| {
            let v = matrix.at(*e);
            v == row_min[e.row] && v == col_max[e.col]
        });
    let entry = saddles.next()?;
    let unique = saddles.next().is_none();
    let value = matrix.at(entry);
    let strict = unique
        && (0..n).all(|i| i == entry.row || matrix.get(i, entry.col) < value)
        && (0..m).all(|j| j == entry.col || matrix.get(entry.row, j) > value);
    Some(Psne { entry, strict })
}

/// Instance hardness around a strict equilibrium `(i*, j*)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HardnessStats {
    pub psne: Entry,
    /// `|A[i][j*] - A[i*][j*]|` for every row (zero at `i*`).
    pub row_gaps: Vec<f64>,
    /// `|A[i*][j] - A[i*][j*]|` for every column (zero at `j*`).
    pub col_gaps: Vec<f64>,
    /// Sum of inverse squared gaps over the equilibrium row and column.
    pub h1: f64,
    /// `((n + m - 2) / h1)^(1/2)`; infinite for a 1x1 matrix.
    pub delta_g: f64,
    /// Smallest nonzero gap; infinite for a 1x1 matrix.
    pub delta_min: f64,
    pub strict: bool,
    /// For dueling matrices (`P[i][j] + P[j][i] = 1`) the Condorcet-winner
    /// hardness `sum_{i != i*} (P[i*][i] - 1/2)^-2`, which is `h1 / 2`.
    pub dueling_h1: Option<f64>,
}

impl HardnessStats {
    /// The hardness used to scale experiment budgets: the Condorcet hardness
    /// for dueling matrices and `h1` otherwise.
    pub fn budget_h1(&self) -> f64 {
        self.dueling_h1.unwrap_or(self.h1)
    }
}

/// Closed-form gaps and hardness of a matrix with a strict equilibrium.
pub fn hardness_stats(matrix: &GameMatrix) -> Result<HardnessStats, GameError> {
    let psne = match psne_exact(matrix) {
        Some(p) if p.strict => p.entry,
        Some(p) => {
            return Err(GameError::NoStrictPsne {
                found: Some(p.entry),
            })
        }
        None => return Err(GameError::NoStrictPsne { found: None }),
    };
    let (n, m) = (matrix.rows(), matrix.cols());
    let value = matrix.at(psne);
    let row_gaps: Vec<f64> = matrix.column(psne.col).map(|a| (a - value).abs()).collect();
    let col_gaps: Vec<f64> = matrix
        .row(psne.row)
        .iter()
        .map(|a| (a - value).abs())
        .collect();

    let off_row = row_gaps
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != psne.row)
        .map(|(_, g)| *g);
    let off_col = col_gaps
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != psne.col)
        .map(|(_, g)| *g);
    let h1: f64 = off_row
        .clone()
        .chain(off_col.clone())
        .map(|g| g.powi(-2))
        .sum();
    let delta_min = off_row.chain(off_col).fold(f64::INFINITY, f64::min);
    let delta_g = if n + m > 2 {
        ((n + m - 2) as f64 / h1).sqrt()
    } else {
        f64::INFINITY
    };
    let dueling_h1 = matrix.is_dueling(DUELING_TOL).then_some(h1 / 2.0);

    Ok(HardnessStats {
        psne,
        row_gaps,
        col_gaps,
        h1,
        delta_g,
        delta_min,
        strict: true,
        dueling_h1,
    })
}
