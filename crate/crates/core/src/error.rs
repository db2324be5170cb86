use thiserror::Error;

use crate::game::GameError;

/// Failures shared by the identification algorithms.
#[derive(Debug, Error)]
pub enum AlgorithmError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("cannot take an order statistic of an empty arm set")]
    EmptyArmSet,
    #[error("budget of {budget} samples is below the minimum of {required}")]
    BudgetTooSmall { budget: u64, required: u64 },
    #[error("no candidate was accepted within {rounds} rounds; the equilibrium may be missing or non-strict")]
    MaxRoundsExceeded { rounds: u32 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// `ceil(x)` as a sample count, failing instead of saturating.
pub(crate) fn ceil_count(x: f64) -> Result<u64, AlgorithmError> {
    // 2^64 is exactly representable; anything at or above it does not fit.
    if !x.is_finite() || x >= 18_446_744_073_709_551_616.0 {
        return Err(GameError::CountOverflow.into());
    }
    Ok(x.ceil().max(0.0) as u64)
}

pub(crate) fn check_delta(delta: f64) -> Result<(), AlgorithmError> {
    if delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(AlgorithmError::InvalidParameter(format!(
            "confidence delta must lie in (0, 1), got {delta}"
        )))
    }
}
