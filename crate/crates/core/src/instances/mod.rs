//! Benchmark instance generators and reductions from dueling and
//! multi-armed bandits to matrix games.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{psne_exact, GameError, GameMatrix, NoiseModel, DUELING_TOL};

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("invalid instance parameters: {0}")]
    InvalidParams(String),
    #[error("P[{i}][{j}] + P[{j}][{i}] = {sum}, expected 1")]
    SkewViolation { i: usize, j: usize, sum: f64 },
    #[error("no matrix with a strict equilibrium after {attempts} attempts")]
    RejectionLimit { attempts: u64 },
    #[error(transparent)]
    Game(#[from] GameError),
}

/// Parameters of the hard benchmark family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AHardParams {
    pub d: usize,
    pub delta_min: f64,
    pub beta: f64,
}

impl AHardParams {
    pub fn new(d: usize, delta_min: f64, beta: f64) -> Self {
        Self { d, delta_min, beta }
    }

    /// The family's hardness `(d-2)/beta^2 + 1/delta_min^2`, which equals the
    /// Condorcet-winner hardness of the matrix as a dueling instance.
    pub fn h1(&self) -> f64 {
        (self.d - 2) as f64 / (self.beta * self.beta) + 1.0 / (self.delta_min * self.delta_min)
    }
}

/// The `d x d` hard instance: a dueling matrix with Condorcet winner 1 whose
/// nearest competitor (row 2) is `delta_min` away and whose other rows lose
/// to it by `beta`; rows 2..d form a transitive tournament among themselves.
///
/// ```text
///  0.5          0.5+dmin   0.5+beta ... 0.5+beta
///  0.5-dmin     0.5        1        ... 1
///  0.5-beta     0          0.5      ... 1
///  ...                                  ...
///  0.5-beta     0          0        ... 0.5
/// ```
///
/// Noise is Bernoulli and the matrix is tagged `dueling`.
pub fn make_a_hard(params: AHardParams) -> Result<GameMatrix, InstanceError> {
    let AHardParams { d, delta_min, beta } = params;
    if d < 3 {
        return Err(InstanceError::InvalidParams(format!(
            "d must be at least 3, got {d}"
        )));
    }
    if !(delta_min > 0.0 && delta_min <= beta && beta <= 0.5) {
        return Err(InstanceError::InvalidParams(format!(
            "need 0 < delta_min <= beta <= 0.5, got delta_min = {delta_min}, beta = {beta}"
        )));
    }
    let mut a = vec![vec![0.0; d]; d];
    for (i, row) in a.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = match (i, j) {
                (0, 0) => 0.5,
                (0, 1) => 0.5 + delta_min,
                (0, _) => 0.5 + beta,
                (1, 0) => 0.5 - delta_min,
                (_, 0) => 0.5 - beta,
                _ if i == j => 0.5,
                _ if i < j => 1.0,
                _ => 0.0,
            };
        }
    }
    Ok(GameMatrix::new(a, NoiseModel::Bernoulli)?.with_tags(["a_hard", "dueling"]))
}

/// Treats a preference matrix `P` (`P[i][j]` = probability that `i` beats `j`)
/// as a game with `A = P` and Bernoulli duel outcomes. A Condorcet winner `i`
/// becomes the equilibrium `(i, i)`.
pub fn dueling_to_game(p: Vec<Vec<f64>>) -> Result<GameMatrix, InstanceError> {
    let k = p.len();
    if p.iter().any(|row| row.len() != k) {
        return Err(InstanceError::InvalidParams(
            "preference matrix must be square".into(),
        ));
    }
    for i in 0..k {
        for j in i..k {
            let sum = p[i][j] + p[j][i];
            if (sum - 1.0).abs() > DUELING_TOL {
                return Err(InstanceError::SkewViolation { i, j, sum });
            }
        }
    }
    Ok(GameMatrix::new(p, NoiseModel::Bernoulli)?.with_tags(["dueling"]))
}

/// An `n x 1` game whose rows are the arms of a Gaussian bandit; the best
/// arm `i` becomes the equilibrium `(i, 0)`.
pub fn mab_to_game(means: &[f64]) -> Result<GameMatrix, InstanceError> {
    let rows = means.iter().map(|&mu| vec![mu]).collect();
    Ok(GameMatrix::new(rows, NoiseModel::standard_gaussian())?.with_tags(["mab"]))
}

/// Attempts allowed to [`make_random_strict`].
pub const REJECTION_LIMIT: u64 = 100_000;

/// Rejection-samples i.i.d. uniform `[-1, 1]` matrices until one has a strict
/// equilibrium. Gaussian noise with `sigma = 1`; deterministic per seed.
///
/// The acceptance probability is `n! m! / (n+m-1)!`, about `1.2e-3` at 8x8;
/// use [`make_planted_strict`] beyond that.
pub fn make_random_strict(n: usize, m: usize, seed: u64) -> Result<GameMatrix, InstanceError> {
    if n == 0 || m == 0 {
        return Err(InstanceError::InvalidParams(
            "n and m must be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..REJECTION_LIMIT {
        let entries: Vec<f64> = (0..n * m).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let a = GameMatrix::from_row_major(n, m, entries, NoiseModel::standard_gaussian())?;
        if psne_exact(&a).is_some_and(|p| p.strict) {
            return Ok(a.with_tags(["random"]));
        }
    }
    Err(InstanceError::RejectionLimit {
        attempts: REJECTION_LIMIT,
    })
}

/// A random `n x m` matrix with a strict equilibrium planted at a uniformly
/// chosen entry: its column lies below the equilibrium value and its row
/// above, all values uniform on the allowed side, everything else uniform on
/// `[-1, 1]`. Gaussian noise with `sigma = 1`.
pub fn make_planted_strict(n: usize, m: usize, seed: u64) -> Result<GameMatrix, InstanceError> {
    if n == 0 || m == 0 {
        return Err(InstanceError::InvalidParams(
            "n and m must be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let (is, js) = (rng.random_range(0..n), rng.random_range(0..m));
        let v: f64 = rng.random_range(-0.9..0.9);
        let mut entries = Vec::with_capacity(n * m);
        for i in 0..n {
            for j in 0..m {
                entries.push(if (i, j) == (is, js) {
                    v
                } else if j == js {
                    rng.random_range(-1.0..v)
                } else if i == is {
                    rng.random_range(v..1.0)
                } else {
                    rng.random_range(-1.0..=1.0)
                });
            }
        }
        let a = GameMatrix::from_row_major(n, m, entries, NoiseModel::standard_gaussian())?;
        // Half-open ranges make ties with `v` impossible; repeated draws would be
        // the only way to lose strictness.
        if psne_exact(&a).is_some_and(|p| p.strict) {
            return Ok(a.with_tags(["planted"]));
        }
    }
}
