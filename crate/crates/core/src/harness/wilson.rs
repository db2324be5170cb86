use statrs::distribution::{ContinuousCDF, Normal};

use super::HarnessError;

/// Wilson score interval for a binomial proportion.
///
/// The bounds are clamped to `[0, 1]` and always contain `successes / trials`.
pub fn wilson_ci(successes: u64, trials: u64, confidence: f64) -> Result<(f64, f64), HarnessError> {
    if trials == 0 || successes > trials {
        return Err(HarnessError::InvalidCounts { successes, trials });
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(HarnessError::InvalidConfig(format!(
            "confidence must lie in (0, 1), got {confidence}"
        )));
    }
    let z = Normal::standard().inverse_cdf(0.5 + confidence / 2.0);
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let center = p + z2 / (2.0 * n);
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let denom = 1.0 + z2 / n;
    let lo = ((center - half) / denom).clamp(0.0, 1.0).min(p);
    let hi = ((center + half) / denom).clamp(0.0, 1.0).max(p);
    Ok((lo, hi))
}
