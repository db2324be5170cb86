use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, StandardNormal};

use super::{Entry, GameError, GameMatrix, NoiseModel};
use crate::seed::OracleSeed;

/// Counting sampler over a hidden [`GameMatrix`].
///
/// Every observation goes through [`sample`](Self::sample) or
/// [`sample_sum`](Self::sample_sum), which tally the per-entry and total query
/// counts. `sample_sum(i, j, k)` returns the sum of `k` fresh observations
/// drawn from its exact sampling distribution (a binomial draw for Bernoulli
/// noise, a single normal draw for Gaussian noise), so algorithms whose
/// budgets run into the billions stay cheap to simulate while the counters
/// remain exact.
#[derive(Debug, Clone)]
pub struct SamplingOracle {
    matrix: Arc<GameMatrix>,
    counts: Vec<u64>,
    total: u64,
    noise_rng: ChaCha8Rng,
    policy_rng: ChaCha8Rng,
}

impl SamplingOracle {
    pub fn new(matrix: Arc<GameMatrix>, seed: impl Into<OracleSeed>) -> Self {
        let seed = seed.into();
        let cells = matrix.rows() * matrix.cols();
        Self {
            matrix,
            counts: vec![0; cells],
            total: 0,
            noise_rng: seed.noise_rng(),
            policy_rng: seed.policy_rng(),
        }
    }

    pub fn matrix(&self) -> &GameMatrix {
        &self.matrix
    }

    pub fn shared_matrix(&self) -> Arc<GameMatrix> {
        Arc::clone(&self.matrix)
    }

    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    /// Total number of observations served so far.
    pub fn total_count(&self) -> u64 {
        self.total
    }

    pub fn count(&self, row: usize, col: usize) -> u64 {
        self.counts[row * self.matrix.cols() + col]
    }

    /// Row-major per-entry query counts.
    pub fn per_entry_counts(&self) -> &[u64] {
        &self.counts
    }

    /// Randomness reserved for the algorithm's own choices (subsampling,
    /// arm selection). Kept separate from observation noise.
    pub fn policy_rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.policy_rng
    }

    /// One noisy observation of `A[row][col]`.
    pub fn sample(&mut self, row: usize, col: usize) -> Result<f64, GameError> {
        let mean = self.charge(row, col, 1)?;
        Ok(match self.matrix.noise() {
            NoiseModel::Zero => mean,
            NoiseModel::Gaussian { sigma } => {
                let z: f64 = StandardNormal.sample(&mut self.noise_rng);
                mean + sigma * z
            }
            NoiseModel::Bernoulli => bernoulli(&mut self.noise_rng, mean),
        })
    }

    pub fn sample_entry(&mut self, entry: Entry) -> Result<f64, GameError> {
        self.sample(entry.row, entry.col)
    }

    /// Sum of `pulls` independent observations of `A[row][col]`.
    pub fn sample_sum(&mut self, row: usize, col: usize, pulls: u64) -> Result<f64, GameError> {
        if pulls == 1 {
            return self.sample(row, col);
        }
        let mean = self.charge(row, col, pulls)?;
        if pulls == 0 {
            return Ok(0.0);
        }
        let k = pulls as f64;
        Ok(match self.matrix.noise() {
            NoiseModel::Zero => mean * k,
            NoiseModel::Gaussian { sigma } => {
                let z: f64 = StandardNormal.sample(&mut self.noise_rng);
                mean * k + sigma * k.sqrt() * z
            }
            NoiseModel::Bernoulli => {
                if mean <= 0.0 {
                    0.0
                } else if mean >= 1.0 {
                    k
                } else {
                    Binomial::new(pulls, mean)
                        .expect("entry validated to lie in [0, 1]")
                        .sample(&mut self.noise_rng) as f64
                }
            }
        })
    }

    /// Empirical mean of `pulls` fresh observations.
    pub fn sample_mean(&mut self, row: usize, col: usize, pulls: u64) -> Result<f64, GameError> {
        if pulls == 0 {
            return Err(GameError::ZeroPulls);
        }
        Ok(self.sample_sum(row, col, pulls)? / pulls as f64)
    }

    fn charge(&mut self, row: usize, col: usize, pulls: u64) -> Result<f64, GameError> {
        if !self.matrix.contains(row, col) {
            return Err(GameError::IndexOutOfRange {
                row,
                col,
                rows: self.matrix.rows(),
                cols: self.matrix.cols(),
            });
        }
        let total = self
            .total
            .checked_add(pulls)
            .ok_or(GameError::CountOverflow)?;
        let idx = row * self.matrix.cols() + col;
        self.counts[idx] += pulls;
        self.total = total;
        Ok(self.matrix.get(row, col))
    }
}

fn bernoulli(rng: &mut ChaCha8Rng, p: f64) -> f64 {
    if rng.random::<f64>() < p {
        1.0
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn oracle(rows: Vec<Vec<f64>>, noise: NoiseModel, seed: u64) -> SamplingOracle {
        SamplingOracle::new(Arc::new(GameMatrix::new(rows, noise).unwrap()), seed)
    }

    #[test]
    fn zero_noise_returns_entry_and_counts() {
        let mut o = oracle(vec![vec![0.3, -0.2]], NoiseModel::Zero, 0);
        assert_eq!(o.sample(0, 0).unwrap(), 0.3);
        assert_eq!(o.count(0, 0), 1);
        assert_eq!(o.total_count(), 1);
        assert_eq!(o.sample_sum(0, 1, 10).unwrap(), -0.2 * 10.0);
        assert_eq!(o.total_count(), 11);
    }

    #[test]
    fn degenerate_bernoulli_is_deterministic() {
        let mut o = oracle(vec![vec![1.0, 0.0]], NoiseModel::Bernoulli, 3);
        for _ in 0..100 {
            assert_eq!(o.sample(0, 0).unwrap(), 1.0);
            assert_eq!(o.sample(0, 1).unwrap(), 0.0);
        }
        assert_eq!(o.sample_sum(0, 0, 1_000_000_000).unwrap(), 1e9);
    }

    #[test]
    fn out_of_range_is_rejected_without_counting() {
        let mut o = oracle(vec![vec![0.0]], NoiseModel::Zero, 0);
        assert!(matches!(
            o.sample(1, 0),
            Err(GameError::IndexOutOfRange { .. })
        ));
        assert_eq!(o.total_count(), 0);
    }

    #[test]
    fn gaussian_mean_concentrates() {
        // Standard error is 1e-3, so leaving [-0.005, 0.005] is a 5-sigma event.
        let mut o = oracle(vec![vec![0.0]], NoiseModel::standard_gaussian(), 11);
        let sum: f64 = (0..1_000_000).map(|_| o.sample(0, 0).unwrap()).sum();
        assert!((sum / 1e6).abs() <= 0.005);
        assert_eq!(o.total_count(), 1_000_000);
    }

    #[test]
    fn batched_bernoulli_matches_mean() {
        let mut o = oracle(vec![vec![0.3]], NoiseModel::Bernoulli, 5);
        let mean = o.sample_mean(0, 0, 10_000_000).unwrap();
        assert!((mean - 0.3).abs() < 1e-3);
    }

    #[test]
    fn count_overflow_is_an_error() {
        let mut o = oracle(vec![vec![0.0]], NoiseModel::Zero, 0);
        o.sample_sum(0, 0, u64::MAX).unwrap();
        assert!(matches!(o.sample(0, 0), Err(GameError::CountOverflow)));
        assert_eq!(o.total_count(), u64::MAX);
    }
}
