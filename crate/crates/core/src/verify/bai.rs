//! Fixed-confidence best-arm identification under a hard sample cap.
//!
//! Both algorithms size their confidence bounds by the arm set's
//! sub-Gaussian scale (1 unless the arm set knows better) and return `None`
//! when the next batch of pulls would exceed the cap. Without noise a single
//! pull per arm and round is enough, and tied best arms are never separated.

use serde::{Deserialize, Serialize};

use crate::midsearch::ArmSet;
use crate::{ceil_count, check_delta, AlgorithmError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaiAlgorithm {
    /// Exponential-gap elimination with a median-elimination inner call. Its
    /// constants put it far above any practical cap.
    ExponentialGap,
    /// Sequential halving with doubling budgets; stops once the leader's
    /// lower confidence bound clears every other arm's upper bound.
    #[default]
    DoublingHalving,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BaiOutcome {
    /// Index into the arm set, or `None` if the cap ran out first.
    pub best: Option<usize>,
    pub samples: u64,
}

enum Halt {
    Exhausted,
    Failed(AlgorithmError),
}

impl From<AlgorithmError> for Halt {
    fn from(e: AlgorithmError) -> Self {
        Halt::Failed(e)
    }
}

struct Capped<'a, A: ArmSet> {
    arms: &'a mut A,
    cap: u64,
    used: u64,
    scale: f64,
}

impl<A: ArmSet> Capped<'_, A> {
    /// `ceil(rate * scale^2)` pulls, or one pull without noise.
    fn pulls(&self, rate: f64) -> Result<u64, Halt> {
        if self.scale == 0.0 {
            return Ok(1);
        }
        Ok(ceil_count(rate * self.scale * self.scale)?.max(1))
    }

    fn mean(&mut self, arm: usize, pulls: u64) -> Result<f64, Halt> {
        Ok(self.sum(arm, pulls)? / pulls as f64)
    }

    fn sum(&mut self, arm: usize, pulls: u64) -> Result<f64, Halt> {
        match self.used.checked_add(pulls) {
            Some(total) if total <= self.cap => {
                let s = self.arms.pull_sum(arm, pulls)?;
                self.used = total;
                Ok(s)
            }
            _ => Err(Halt::Exhausted),
        }
    }
}

/// Identifies the arm with the highest mean using at most `cap` samples.
/// A single arm is returned immediately without sampling.
pub fn best_arm_identify(
    arms: &mut impl ArmSet,
    cap: u64,
    delta: f64,
    algorithm: BaiAlgorithm,
) -> Result<BaiOutcome, AlgorithmError> {
    check_delta(delta)?;
    if arms.is_empty() {
        return Err(AlgorithmError::EmptyArmSet);
    }
    if arms.len() == 1 {
        return Ok(BaiOutcome {
            best: Some(0),
            samples: 0,
        });
    }
    let scale = arms.noise_scale();
    let mut capped = Capped {
        arms,
        cap,
        used: 0,
        scale,
    };
    let result = match algorithm {
        BaiAlgorithm::ExponentialGap => exponential_gap(&mut capped, delta),
        BaiAlgorithm::DoublingHalving => doubling_halving(&mut capped, delta),
    };
    match result {
        Ok(best) => Ok(BaiOutcome {
            best: Some(best),
            samples: capped.used,
        }),
        Err(Halt::Exhausted) => Ok(BaiOutcome {
            best: None,
            samples: capped.used,
        }),
        Err(Halt::Failed(e)) => Err(e),
    }
}

fn exponential_gap<A: ArmSet>(arms: &mut Capped<'_, A>, delta: f64) -> Result<usize, Halt> {
    let mut alive: Vec<usize> = (0..arms.arms.len()).collect();
    let mut r = 1i32;
    while alive.len() > 1 {
        let eps = 0.25 * 0.5f64.powi(r);
        let delta_r = delta / (50.0 * f64::from(r).powi(3));
        // The [0, 1]-reward sampling rate, rescaled from the 1/2-sub-Gaussian
        // case.
        let pulls = arms.pulls(8.0 * (3.0 / delta_r).ln() / (eps * eps))?;
        let mut means = Vec::with_capacity(alive.len());
        for &a in &alive {
            means.push(arms.mean(a, pulls)?);
        }
        let reference = median_elimination(arms, &alive, eps / 2.0, delta_r)?;
        let threshold = means[alive.iter().position(|&a| a == reference).unwrap()] - eps;
        alive = alive
            .iter()
            .zip(&means)
            .filter(|&(&a, &mu)| a == reference || mu >= threshold)
            .map(|(&a, _)| a)
            .collect();
        r += 1;
    }
    Ok(alive[0])
}

/// Returns an `eps`-optimal arm of `set` with probability `1 - delta`.
fn median_elimination<A: ArmSet>(
    arms: &mut Capped<'_, A>,
    set: &[usize],
    eps: f64,
    delta: f64,
) -> Result<usize, Halt> {
    let mut alive = set.to_vec();
    let mut eps_l = eps / 4.0;
    let mut delta_l = delta / 2.0;
    while alive.len() > 1 {
        let pulls = arms.pulls(16.0 * (3.0 / delta_l).ln() / (eps_l * eps_l))?;
        let mut scored = Vec::with_capacity(alive.len());
        for &a in &alive {
            scored.push((a, arms.mean(a, pulls)?));
        }
        scored.sort_by(|x, y| y.1.total_cmp(&x.1));
        scored.truncate(alive.len().div_ceil(2));
        alive = scored.into_iter().map(|(a, _)| a).collect();
        alive.sort_unstable();
        eps_l *= 0.75;
        delta_l /= 2.0;
    }
    Ok(alive[0])
}

/// Anytime confidence radius `sqrt(2 ln(4 n s^2 / delta) / s)` after `s` pulls
/// of one of `n` arms.
pub fn anytime_radius(n: usize, s: u64, delta: f64) -> f64 {
    let s = s as f64;
    (2.0 * (4.0 * n as f64 * s * s / delta).ln() / s).sqrt()
}

fn doubling_halving<A: ArmSet>(arms: &mut Capped<'_, A>, delta: f64) -> Result<usize, Halt> {
    let n = arms.arms.len();
    let phases = n.next_power_of_two().trailing_zeros().max(1) as u64;
    let mut sums = vec![0.0f64; n];
    let mut counts = vec![0u64; n];
    let mut round_budget = (n as u64) * phases;
    loop {
        let mut alive: Vec<usize> = (0..n).collect();
        for _ in 0..phases {
            let per = (round_budget / (alive.len() as u64 * phases)).max(1);
            for &a in &alive {
                sums[a] += arms.sum(a, per)?;
                counts[a] += per;
            }
            let mean = |a: usize| sums[a] / counts[a] as f64;
            alive.sort_by(|&x, &y| mean(y).total_cmp(&mean(x)));
            if let Some(best) = certified(arms.scale, &sums, &counts, alive[0], delta) {
                return Ok(best);
            }
            alive.truncate(alive.len().div_ceil(2));
            alive.sort_unstable();
        }
        round_budget = round_budget.saturating_mul(2);
    }
}

/// `leader` if its lower confidence bound clears every other arm's upper bound.
fn certified(scale: f64, sums: &[f64], counts: &[u64], leader: usize, delta: f64) -> Option<usize> {
    let n = sums.len();
    let bound = |a: usize| scale * anytime_radius(n, counts[a], delta);
    let lcb = sums[leader] / counts[leader] as f64 - bound(leader);
    (0..n)
        .filter(|&a| a != leader)
        .all(|a| sums[a] / counts[a] as f64 + bound(a) < lcb)
        .then_some(leader)
}
