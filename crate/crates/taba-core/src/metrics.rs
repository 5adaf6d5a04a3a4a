//! Relative performance gains used to score allocations.

use crate::error::{Error, Result};
use crate::types::ScorePair;

/// Signed relative gain in percent: `(-1)^l * (after - before) / before * 100`,
/// where `l = 1` for loss-style metrics so that improvements are positive
/// either way.
pub fn relative_gain(pair: &ScorePair, lower_is_better: bool) -> Result<f64> {
    if pair.before == 0.0 {
        return Err(Error::DegenerateBaseline);
    }
    let sign = if lower_is_better { -1.0 } else { 1.0 };
    Ok(sign * (pair.after - pair.before) / pair.before * 100.0)
}

/// Unweighted mean of per-task gains (all tasks treated equally). Summed in
/// sorted order so the result is independent of task ordering.
pub fn overall_gain(gains: &[f64]) -> Result<f64> {
    if gains.is_empty() {
        return Err(Error::EmptyGains);
    }
    let mut sorted: alloc::vec::Vec<f64> = gains.to_vec();
    sorted.sort_unstable_by(|a, b| a.total_cmp(b));
    Ok(sorted.iter().sum::<f64>() / sorted.len() as f64)
}
