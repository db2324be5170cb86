//! Quantile-of-means estimators: the z-th highest (CMidVal) or lowest
//! (RMidVal) empirical mean among `k` arms subsampled with replacement,
//! boosted by a median over `ell` repetitions.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::game::SamplingOracle;
use crate::{ceil_count, check_delta, AlgorithmError};

/// A finite set of arms that can be pulled in batches.
pub trait ArmSet {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Sum of `pulls` fresh observations of `arm`.
    fn pull_sum(&mut self, arm: usize, pulls: u64) -> Result<f64, AlgorithmError>;

    /// Randomness for subsampling decisions.
    fn rng(&mut self) -> &mut ChaCha8Rng;

    /// Sub-Gaussian scale of one observation. Confidence bounds shrink with
    /// it; the default is the unit scale every algorithm assumes.
    fn noise_scale(&self) -> f64 {
        1.0
    }
}

/// Which line of the matrix a [`LineArms`] walks along.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Line {
    /// Arms are rows `i` of column `j`, with means `A[i][j]`.
    Column(usize),
    /// Arms are columns `j` of row `i`, with means `A[i][j]`.
    Row(usize),
}

/// Entries of one row or column, restricted to `members`, viewed as arms.
pub struct LineArms<'a> {
    oracle: &'a mut SamplingOracle,
    line: Line,
    members: &'a [usize],
    negate: bool,
}

impl<'a> LineArms<'a> {
    pub fn new(oracle: &'a mut SamplingOracle, line: Line, members: &'a [usize]) -> Self {
        Self {
            oracle,
            line,
            members,
            negate: false,
        }
    }

    /// Serves `-A[i][j]` instead of `A[i][j]`.
    pub fn negated(mut self) -> Self {
        self.negate = !self.negate;
        self
    }
}

impl ArmSet for LineArms<'_> {
    fn len(&self) -> usize {
        self.members.len()
    }

    fn pull_sum(&mut self, arm: usize, pulls: u64) -> Result<f64, AlgorithmError> {
        let (i, j) = match self.line {
            Line::Column(j) => (self.members[arm], j),
            Line::Row(i) => (i, self.members[arm]),
        };
        let s = self.oracle.sample_sum(i, j, pulls)?;
        Ok(if self.negate { -s } else { s })
    }

    fn rng(&mut self) -> &mut ChaCha8Rng {
        self.oracle.policy_rng()
    }

    fn noise_scale(&self) -> f64 {
        self.oracle.matrix().noise().sub_gaussian_scale()
    }
}

/// Failure probability of a single subsample's order statistic.
pub const MIDVAL_DELTA1: f64 = 0.05;
/// Failure probability of the subsample's composition.
pub const MIDVAL_DELTA2: f64 = 0.05;

/// Constants of one mid-value call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MidValConfig {
    pub epsilon: f64,
    pub delta: f64,
    /// Outer repetitions, `ceil(14 ln(1/delta))`.
    pub ell: u64,
    pub delta1: f64,
    pub delta2: f64,
    /// Subsample size, `ceil(108 ln(4/delta2))` rounded up to a multiple of 3.
    pub k: u64,
    /// Order statistic, `k/3 + 1`.
    pub z: u64,
    /// `ceil(2 ln(2k/delta1) / epsilon^2)`.
    pub per_arm_pulls: u64,
}

impl MidValConfig {
    pub fn new(epsilon: f64, delta: f64) -> Result<Self, AlgorithmError> {
        check_delta(delta)?;
        if !(epsilon > 0.0) {
            return Err(AlgorithmError::InvalidParameter(format!(
                "epsilon must be positive, got {epsilon}"
            )));
        }
        let (delta1, delta2) = (MIDVAL_DELTA1, MIDVAL_DELTA2);
        let ell = ceil_count(14.0 * (1.0 / delta).ln())?.max(1);
        let k = ceil_count(108.0 * (4.0 / delta2).ln())?.next_multiple_of(3);
        let per_arm_pulls = ceil_count(2.0 * (2.0 * k as f64 / delta1).ln() / (epsilon * epsilon))?;
        Ok(Self {
            epsilon,
            delta,
            ell,
            delta1,
            delta2,
            k,
            z: k / 3 + 1,
            per_arm_pulls,
        })
    }

    /// Exact number of oracle samples one call consumes: `ell * k * per_arm_pulls`.
    pub fn total_samples(&self) -> Result<u64, AlgorithmError> {
        self.ell
            .checked_mul(self.k)
            .and_then(|x| x.checked_mul(self.per_arm_pulls))
            .ok_or_else(|| crate::game::GameError::CountOverflow.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Order {
    Highest,
    Lowest,
}

/// Estimates a value between the `ceil(n/2)`-th and `(ceil(n/4)+1)`-th
/// highest arm means, up to `epsilon`, with probability at least `1 - delta`.
pub fn cmidval(arms: &mut impl ArmSet, config: &MidValConfig) -> Result<f64, AlgorithmError> {
    midval(arms, config, Order::Highest)
}

/// Mirror of [`cmidval`]: a value between the `(ceil(n/4)+1)`-th and the
/// `ceil(n/2)`-th lowest arm means, up to `epsilon`.
pub fn rmidval(arms: &mut impl ArmSet, config: &MidValConfig) -> Result<f64, AlgorithmError> {
    midval(arms, config, Order::Lowest)
}

fn midval(
    arms: &mut impl ArmSet,
    config: &MidValConfig,
    order: Order,
) -> Result<f64, AlgorithmError> {
    let n = arms.len();
    if n == 0 {
        return Err(AlgorithmError::EmptyArmSet);
    }
    config.total_samples()?;
    let k = config.k as usize;
    let z = config.z as usize;
    let pulls = config.per_arm_pulls;

    let mut picks = vec![0usize; k];
    let mut means = vec![0.0f64; k];
    let mut values = Vec::with_capacity(config.ell as usize);
    for _ in 0..config.ell {
        let rng = arms.rng();
        for p in picks.iter_mut() {
            *p = rng.random_range(0..n);
        }
        for (mean, &arm) in means.iter_mut().zip(&picks) {
            *mean = arms.pull_sum(arm, pulls)? / pulls as f64;
        }
        let (_, v, _) = match order {
            Order::Highest => means.select_nth_unstable_by(z - 1, |a, b| b.total_cmp(a)),
            Order::Lowest => means.select_nth_unstable_by(z - 1, |a, b| a.total_cmp(b)),
        };
        values.push(*v);
    }
    Ok(median(&mut values))
}

/// Median, averaging the two middle values for even lengths.
fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}
