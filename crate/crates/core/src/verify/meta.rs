use serde::{Deserialize, Serialize};

use super::check::{verify, VerifyConfig, VerifyOutcome};
use crate::game::{Entry, SamplingOracle};
use crate::midsearch::{find_psne_with_gap, GapSearchOutcome};
use crate::run::{AlgorithmRun, Checkpoint, Guess};
use crate::{check_delta, AlgorithmError};

pub const DEFAULT_MAX_ROUNDS: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetaConfig {
    pub max_rounds: u32,
    pub verify: VerifyConfig,
}

impl Default for MetaConfig {
    fn default() -> Self {
        Self {
            max_rounds: DEFAULT_MAX_ROUNDS,
            verify: VerifyConfig::default(),
        }
    }
}

/// Gap guess `2^(1-t)` and confidence `delta / (4 t^2)` of round `t >= 1`.
pub fn meta_schedule(round: u32, delta: f64) -> (f64, f64) {
    let t = f64::from(round);
    (0.5f64.powi(round as i32 - 1), delta / (4.0 * t * t))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetaRound {
    pub round: u32,
    pub gap: f64,
    pub delta: f64,
    pub search: GapSearchOutcome,
    pub verify: VerifyOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetaOutcome {
    pub entry: Entry,
    pub rounds: Vec<MetaRound>,
    /// One checkpoint per round: the proposal and the samples used so far.
    pub run: AlgorithmRun,
}

/// Finds the equilibrium without knowing its gap: round `t` runs the
/// elimination search with gap guess `2^(1-t)` and confidence `delta/(4t^2)`,
/// then verifies the proposal with fresh samples, returning the first
/// accepted pair.
///
/// Fails with [`AlgorithmError::MaxRoundsExceeded`] after `max_rounds`
/// rejected proposals, which usually means there is no strict equilibrium.
pub fn meta_find_psne(
    oracle: &mut SamplingOracle,
    delta: f64,
    config: &MetaConfig,
) -> Result<MetaOutcome, AlgorithmError> {
    check_delta(delta)?;
    let start = oracle.total_count();
    let mut rounds = Vec::new();
    let mut checkpoints = Vec::new();
    for t in 1..=config.max_rounds {
        let (gap, delta_t) = meta_schedule(t, delta);
        let search = find_psne_with_gap(oracle, gap, delta_t)?;
        let verdict = verify(oracle, search.entry, delta_t, gap, &config.verify)?;
        let used = oracle.total_count() - start;
        let guess = Guess {
            entry: search.entry,
            degraded: search.degraded,
        };
        checkpoints.push(Checkpoint {
            samples: used,
            guess: Some(guess),
        });
        let accepted = verdict.accepted();
        let entry = search.entry;
        rounds.push(MetaRound {
            round: t,
            gap,
            delta: delta_t,
            search,
            verify: verdict,
        });
        if accepted {
            return Ok(MetaOutcome {
                entry,
                rounds,
                run: AlgorithmRun {
                    algorithm: "meta".into(),
                    checkpoints,
                    final_guess: Some(guess),
                    samples_used: used,
                },
            });
        }
    }
    Err(AlgorithmError::MaxRoundsExceeded {
        rounds: config.max_rounds,
    })
}
