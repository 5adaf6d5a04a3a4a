//! Transferred-informativeness estimation from probe logs.
//!
//! A probe compares task j's score after briefly training jointly with task
//! i against two references: training on a doubled task-j batch and training
//! on task j alone. The ratio of the two score deltas is the relative
//! transferred informativeness for that step; averaging over the log gives
//! the transfer matrix entry.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::types::{ProbeRecord, TransferMatrix};

/// Probes whose self-pair delta is smaller than this carry no signal and are
/// skipped rather than divided through.
pub const DENOMINATOR_EPS: f64 = 1e-8;

/// Per-step transfer ratio, or `None` when the probe is degenerate.
pub fn step_transfer(record: &ProbeRecord) -> Result<Option<f64>> {
    if record.source == record.target {
        return Err(Error::SelfProbe(record.source));
    }
    if ![record.score_joint, record.score_self_pair, record.score_base]
        .iter()
        .all(|s| s.is_finite())
    {
        return Err(Error::NonFinite("probe score"));
    }
    let denominator = record.score_self_pair - record.score_base;
    if libm::fabs(denominator) < DENOMINATOR_EPS {
        return Ok(None);
    }
    Ok(Some((record.score_joint - record.score_base) / denominator))
}

/// Averages per-step transfer ratios into a K x K matrix with unit diagonal.
///
/// Skipped (degenerate) probes count as missing data, not as zero. Every
/// ordered pair must retain at least one usable record. The per-pair values
/// are sorted before averaging so the result does not depend on log order.
pub fn estimate_transfer(log: &[ProbeRecord], tasks: usize) -> Result<TransferMatrix> {
    let mut samples: Vec<Vec<Vec<f64>>> = vec![vec![Vec::new(); tasks]; tasks];
    for record in log {
        for index in [record.source, record.target] {
            if index >= tasks {
                return Err(Error::ProbeIndexOutOfRange { index, dim: tasks });
            }
        }
        if let Some(value) = step_transfer(record)? {
            samples[record.source][record.target].push(value);
        }
    }

    let mut values = vec![vec![0.0f64; tasks]; tasks];
    for (i, row) in samples.iter_mut().enumerate() {
        values[i][i] = 1.0;
        for (j, cell) in row.iter_mut().enumerate() {
            if i == j {
                continue;
            }
            if cell.is_empty() {
                return Err(Error::IncompletePair {
                    from_task: i,
                    to_task: j,
                });
            }
            cell.sort_unstable_by(|a, b| a.total_cmp(b));
            values[i][j] = cell.iter().sum::<f64>() / cell.len() as f64;
        }
    }
    TransferMatrix::new(values)
}
