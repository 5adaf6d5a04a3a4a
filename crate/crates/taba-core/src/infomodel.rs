//! The information-gathering model.
//!
//! Adding labels to a task yields geometrically diminishing returns: the
//! k-th new label contributes `beta^(k-1) * I` units of information, so N
//! labels gather `(1 - beta^N) / (1 - beta) * I` in closed form, with the
//! limit `N * I` at beta = 1.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::types::TransferMatrix;

/// Below this distance from 1, beta is treated as exactly 1 and the linear
/// limit is used; keeps `beta^N` well-conditioned near the boundary.
pub const BETA_ONE_EPS: f64 = 1e-12;

fn check(informativeness: f64, beta: f64) -> Result<()> {
    if !informativeness.is_finite() {
        return Err(Error::NonFinite("informativeness"));
    }
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::BetaOutOfRange(beta));
    }
    Ok(())
}

/// `beta^n` via exp(n ln beta), with the degenerate bases handled exactly.
pub(crate) fn beta_pow(beta: f64, n: u64) -> f64 {
    if n == 0 {
        1.0
    } else if beta == 0.0 {
        0.0
    } else if 1.0 - beta < BETA_ONE_EPS {
        1.0
    } else {
        libm::exp(n as f64 * libm::log(beta))
    }
}

pub(crate) fn gather_unchecked(informativeness: f64, beta: f64, count: u64) -> f64 {
    if count == 0 {
        0.0
    } else if 1.0 - beta < BETA_ONE_EPS {
        count as f64 * informativeness
    } else {
        (1.0 - beta_pow(beta, count)) / (1.0 - beta) * informativeness
    }
}

pub(crate) fn marginal_unchecked(informativeness: f64, beta: f64, count: u64) -> f64 {
    beta_pow(beta, count) * informativeness
}

/// Total information gathered by `count` labels of a task with aggregate
/// informativeness `informativeness` and reduction rate `beta`.
pub fn gather(informativeness: f64, beta: f64, count: u64) -> Result<f64> {
    check(informativeness, beta)?;
    Ok(gather_unchecked(informativeness, beta, count))
}

/// Information contributed by the (count+1)-th label: `beta^count * I`.
pub fn marginal(informativeness: f64, beta: f64, count: u64) -> Result<f64> {
    check(informativeness, beta)?;
    Ok(marginal_unchecked(informativeness, beta, count))
}

/// Aggregate informativeness per task: the row sum of the transfer matrix,
/// i.e. self-informativeness (the unit diagonal) plus everything the task's
/// labels transfer to the others.
pub fn aggregate_informativeness(m: &TransferMatrix) -> Vec<f64> {
    (0..m.dim())
        .map(|i| m.row(i).iter().sum())
        .collect()
}
