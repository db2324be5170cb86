use rand::Rng;

use crate::game::{Entry, NoiseModel, SamplingOracle};
use crate::run::{AlgorithmRun, Guess, Recorder};
use crate::AlgorithmError;

/// Maps an observation to a reward in `[0, 1]`: Bernoulli outcomes are used
/// as is, anything else is clipped to `[-2, 2]` and mapped affinely.
pub fn unit_reward(noise: NoiseModel, observation: f64) -> f64 {
    match noise {
        NoiseModel::Bernoulli => observation,
        _ => (observation.clamp(-2.0, 2.0) + 2.0) / 4.0,
    }
}

/// An adversarial bandit learner that minimizes losses in `[0, 1]`.
pub trait Learner {
    /// Sampling distribution for the next round.
    fn distribution(&mut self) -> &[f64];
    /// Feeds back the loss of the arm that was played from the last distribution.
    fn update(&mut self, arm: usize, loss: f64);
}

/// EXP3 with implicit exploration.
#[derive(Debug, Clone)]
pub struct Exp3Ix {
    eta: f64,
    gamma: f64,
    losses: Vec<f64>,
    probs: Vec<f64>,
}

impl Exp3Ix {
    /// Learning rate `sqrt(2 ln k / (k horizon))` and exploration `eta / 2`.
    pub fn new(arms: usize, horizon: u64) -> Self {
        let k = arms as f64;
        let eta = if arms > 1 && horizon > 0 {
            (2.0 * k.ln() / (k * horizon as f64)).sqrt()
        } else {
            0.0
        };
        Self {
            eta,
            gamma: eta / 2.0,
            losses: vec![0.0; arms],
            probs: vec![1.0 / k; arms],
        }
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }
}

impl Learner for Exp3Ix {
    fn distribution(&mut self) -> &[f64] {
        &self.probs
    }

    fn update(&mut self, arm: usize, loss: f64) {
        self.losses[arm] += loss / (self.probs[arm] + self.gamma);
        let min = self.losses.iter().copied().fold(f64::INFINITY, f64::min);
        let mut total = 0.0;
        for (p, l) in self.probs.iter_mut().zip(&self.losses) {
            *p = (-self.eta * (l - min)).exp();
            total += *p;
        }
        self.probs.iter_mut().for_each(|p| *p /= total);
    }
}

/// Tsallis-INF with the 1/2-Tsallis regularizer, learning rate `2/sqrt(t)`
/// and reduced-variance loss estimates.
#[derive(Debug, Clone)]
pub struct TsallisInf {
    round: u64,
    losses: Vec<f64>,
    probs: Vec<f64>,
    x: f64,
    fresh: bool,
}

/// Convergence tolerance of the normalization solve.
pub const TSALLIS_TOL: f64 = 1e-10;

impl TsallisInf {
    pub fn new(arms: usize) -> Self {
        Self {
            round: 1,
            losses: vec![0.0; arms],
            probs: vec![1.0 / arms as f64; arms],
            x: f64::NAN,
            fresh: false,
        }
    }

    fn eta(&self) -> f64 {
        2.0 / (self.round as f64).sqrt()
    }

    /// Solves `sum_i 4 / (eta (L_i - x))^2 = 1` for `x < min L` by Newton's
    /// method, falling back to bisection whenever a step leaves the bracket.
    fn normalize(&mut self) {
        let eta = self.eta();
        let k = self.losses.len() as f64;
        let min = self.losses.iter().copied().fold(f64::INFINITY, f64::min);
        // The smallest term alone reaches 1 at `hi`; every term is at most 1/k at `lo`.
        let (mut lo, mut hi) = (min - 2.0 * k.sqrt() / eta, min - 2.0 / eta);
        let mut x = if self.x.is_finite() {
            self.x.clamp(lo, hi)
        } else {
            hi
        };
        for _ in 0..200 {
            let (mut f, mut df) = (-1.0, 0.0);
            for l in &self.losses {
                let u = eta * (l - x);
                f += 4.0 / (u * u);
                df += 8.0 * eta / (u * u * u);
            }
            if f.abs() <= TSALLIS_TOL {
                break;
            }
            if f > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            let step = x - f / df;
            x = if step > lo && step < hi {
                step
            } else {
                0.5 * (lo + hi)
            };
            if hi - lo <= TSALLIS_TOL * (1.0 + x.abs()) {
                break;
            }
        }
        self.x = x;
        let mut total = 0.0;
        for (p, l) in self.probs.iter_mut().zip(&self.losses) {
            let u = eta * (l - x);
            *p = 4.0 / (u * u);
            total += *p;
        }
        self.probs.iter_mut().for_each(|p| *p /= total);
    }
}

impl Learner for TsallisInf {
    fn distribution(&mut self) -> &[f64] {
        if !self.fresh {
            if self.losses.len() > 1 {
                self.normalize();
            }
            self.fresh = true;
        }
        &self.probs
    }

    fn update(&mut self, arm: usize, loss: f64) {
        let eta = self.eta();
        let threshold = eta * eta;
        for (i, (l, &p)) in self.losses.iter_mut().zip(&self.probs).enumerate() {
            let b = if p >= threshold { 0.5 } else { 0.0 };
            *l += if i == arm { (loss - b) / p + b } else { b };
        }
        self.round += 1;
        self.fresh = false;
    }
}

fn draw(rng: &mut impl Rng, probs: &[f64]) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}

fn most_played(counts: &[u64]) -> usize {
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = i;
        }
    }
    best
}

/// Two learners play `budget` rounds against each other, one oracle sample
/// per round at the chosen entry. The row learner's loss is `1 - r` and the
/// column learner's loss is `r` for the mapped reward `r`. The guess is the
/// most-played row and column so far.
pub fn self_play(
    oracle: &mut SamplingOracle,
    mut row: impl Learner,
    mut col: impl Learner,
    budget: u64,
    grid: &[u64],
    name: &str,
) -> Result<AlgorithmRun, AlgorithmError> {
    let noise = oracle.matrix().noise();
    let mut recorder = Recorder::new(grid);
    let mut row_counts = vec![0u64; oracle.rows()];
    let mut col_counts = vec![0u64; oracle.cols()];
    let mut next = recorder.next_point();
    for t in 1..=budget {
        let i = draw(oracle.policy_rng(), row.distribution());
        let j = draw(oracle.policy_rng(), col.distribution());
        let r = unit_reward(noise, oracle.sample(i, j)?);
        row.update(i, 1.0 - r);
        col.update(j, r);
        row_counts[i] += 1;
        col_counts[j] += 1;
        if next == Some(t) {
            let guess = Entry::new(most_played(&row_counts), most_played(&col_counts));
            recorder.record_through(t, Some(Guess::firm(guess)));
            next = recorder.next_point();
        }
    }
    let final_guess = (budget > 0).then(|| {
        Guess::firm(Entry::new(
            most_played(&row_counts),
            most_played(&col_counts),
        ))
    });
    Ok(recorder.finish(name, final_guess, budget))
}

pub fn run_exp3ix_selfplay(
    oracle: &mut SamplingOracle,
    budget: u64,
    grid: &[u64],
) -> Result<AlgorithmRun, AlgorithmError> {
    let row = Exp3Ix::new(oracle.rows(), budget);
    let col = Exp3Ix::new(oracle.cols(), budget);
    self_play(oracle, row, col, budget, grid, "exp3ix")
}

pub fn run_tsallis_inf_selfplay(
    oracle: &mut SamplingOracle,
    budget: u64,
    grid: &[u64],
) -> Result<AlgorithmRun, AlgorithmError> {
    let row = TsallisInf::new(oracle.rows());
    let col = TsallisInf::new(oracle.cols());
    self_play(oracle, row, col, budget, grid, "tsallis")
}
