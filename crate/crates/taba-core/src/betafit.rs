//! Reduction-rate fitting from learning curves.
//!
//! The observed improvement after adding N labels is modelled as
//! `(1 - beta^N) / (1 - beta) * ds`. Both parameters are recovered by
//! minimizing the L1 error: an outer one-dimensional search over beta
//! (dense grid, then golden-section refinement around the best cell) with
//! an exact inner solve for `ds`. For fixed beta the features
//! `f_N = (1 - beta^N) / (1 - beta)` are constants and the L1-optimal `ds`
//! is the weighted median of `gain_N / f_N` with weights `f_N`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::infomodel::gather_unchecked;
use crate::types::LearningCurve;

/// Number of grid points on [0, 1] for the outer beta search.
const GRID_POINTS: usize = 2000;

/// 1/phi, the golden-section step.
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Fitted reduction rate, initial gain and achieved L1 residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaFit {
    pub beta: f64,
    pub ds: f64,
    pub residual: f64,
}

/// Model predictions `(1 - beta^N) / (1 - beta) * ds` for each count,
/// using the linear limit `N * ds` at beta = 1.
pub fn predict_curve(beta: f64, ds: f64, counts: &[u64]) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::BetaOutOfRange(beta));
    }
    Ok(counts
        .iter()
        .map(|&n| gather_unchecked(ds, beta, n))
        .collect())
}

/// Weighted median of `values`, resolving ties to the lower value.
fn weighted_median(pairs: &mut [(f64, f64)]) -> f64 {
    pairs.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
    let total: f64 = pairs.iter().map(|p| p.1).sum();
    let mut cumulative = 0.0;
    for &(value, weight) in pairs.iter() {
        cumulative += weight;
        if cumulative >= total * 0.5 {
            return value;
        }
    }
    pairs.last().map(|p| p.0).unwrap_or(0.0)
}

/// Exact inner solve: the L1-optimal ds for a fixed beta, plus the residual.
fn solve_ds(beta: f64, points: &[(u64, f64)]) -> (f64, f64) {
    let mut ratios: Vec<(f64, f64)> = points
        .iter()
        .map(|&(n, gain)| {
            let feature = gather_unchecked(1.0, beta, n);
            (gain / feature, feature)
        })
        .collect();
    let ds = weighted_median(&mut ratios);
    let residual: f64 = points
        .iter()
        .map(|&(n, gain)| libm::fabs(gain - gather_unchecked(ds, beta, n)))
        .sum();
    (ds, residual)
}

/// Fits `(beta, ds)` to a learning curve by minimizing the L1 error.
///
/// Deterministic for fixed inputs; ties resolve to the lower beta and the
/// lower ds.
pub fn fit_reduction_rate(curve: &LearningCurve) -> Result<BetaFit> {
    if curve.points.len() < 2 {
        return Err(Error::InsufficientData {
            task: curve.task.clone(),
            points: curve.points.len(),
        });
    }
    for pair in curve.points.windows(2) {
        if pair[1].n <= pair[0].n {
            return Err(Error::NonIncreasingCurve {
                task: curve.task.clone(),
            });
        }
    }
    if curve.points.iter().any(|p| !p.gain.is_finite()) {
        return Err(Error::NonFinite("learning curve gain"));
    }
    if curve.points[0].n == 0 {
        // f_0 = 0 would make the ratio undefined; the model predicts no
        // gain at zero labels anyway.
        return Err(Error::NonIncreasingCurve {
            task: curve.task.clone(),
        });
    }

    let points: Vec<(u64, f64)> = curve.points.iter().map(|p| (p.n, p.gain)).collect();

    fn consider(best: &mut BetaFit, beta: f64, points: &[(u64, f64)]) {
        let (ds, residual) = solve_ds(beta, points);
        if residual < best.residual {
            *best = BetaFit { beta, ds, residual };
        }
    }

    let mut best = BetaFit {
        beta: 0.0,
        ds: 0.0,
        residual: f64::INFINITY,
    };
    let mut best_index = 0usize;
    for k in 0..GRID_POINTS {
        let beta = k as f64 / (GRID_POINTS - 1) as f64;
        consider(&mut best, beta, &points);
        if best.beta == beta {
            best_index = k;
        }
    }

    // Golden-section refinement inside the bracket around the best cell.
    let step = 1.0 / (GRID_POINTS - 1) as f64;
    let mut lo = (best_index.saturating_sub(1)) as f64 * step;
    let mut hi = ((best_index + 1).min(GRID_POINTS - 1)) as f64 * step;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = solve_ds(x1, &points).1;
    let mut f2 = solve_ds(x2, &points).1;
    for _ in 0..120 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = solve_ds(x1, &points).1;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = solve_ds(x2, &points).1;
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    for beta in [x1, x2, (lo + hi) * 0.5] {
        consider(&mut best, beta.clamp(0.0, 1.0), &points);
    }

    Ok(best)
}
