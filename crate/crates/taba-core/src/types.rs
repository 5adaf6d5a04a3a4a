//! Domain types shared by all modules.
//!
//! Everything here is immutable after construction and safe to share across
//! threads. Budgets and label costs are integers: the exact DP solver needs
//! an integer grid, so fractional costs must be pre-scaled by the caller.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One task's identity, per-label cost and metric orientation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskSpec {
    pub id: String,
    /// Budget units consumed by one new label (c_i). Must be >= 1.
    pub cost: u64,
    /// True when a lower score means better performance (loss-style metrics).
    pub lower_is_better: bool,
}

/// An ordered list of tasks plus the total label budget.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskSet {
    pub tasks: Vec<TaskSpec>,
    pub budget: u64,
}

impl TaskSet {
    pub fn len(&self) -> usize {
        self.tasks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tasks.is_empty()
    }

    pub fn costs(&self) -> impl Iterator<Item = u64> + '_ {
        self.tasks.iter().map(|t| t.cost)
    }
}

/// Result of validating a [`TaskSet`]; carries the violated invariants.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the structural invariants of a task set.
pub fn validate_task_set(ts: &TaskSet) -> ValidationReport {
    let mut violations = Vec::new();
    if ts.tasks.is_empty() {
        violations.push(String::from("task set must contain at least one task"));
    }
    for task in &ts.tasks {
        if task.cost < 1 {
            violations.push(format!("task '{}': cost must be ≥ 1", task.id));
        }
    }
    for (i, task) in ts.tasks.iter().enumerate() {
        if ts.tasks[..i].iter().any(|other| other.id == task.id) {
            violations.push(format!("task id '{}' violates id unique", task.id));
        }
    }
    ValidationReport { violations }
}

/// Allowed absolute deviation of transfer-matrix diagonal entries from 1.
pub const DIAGONAL_TOLERANCE: f64 = 1e-12;

/// K x K matrix of relative transferred informativeness; entry (i, j) is the
/// benefit (or harm, if negative) one task-i label confers on task j. The
/// diagonal is fixed at 1: a label is worth one unit to its own task.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTransferMatrix", into = "RawTransferMatrix")]
pub struct TransferMatrix {
    values: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct RawTransferMatrix {
    values: Vec<Vec<f64>>,
}

impl TryFrom<RawTransferMatrix> for TransferMatrix {
    type Error = Error;

    fn try_from(raw: RawTransferMatrix) -> Result<Self> {
        TransferMatrix::new(raw.values)
    }
}

impl From<TransferMatrix> for RawTransferMatrix {
    fn from(m: TransferMatrix) -> Self {
        RawTransferMatrix { values: m.values }
    }
}

impl TransferMatrix {
    /// Builds a matrix, rejecting non-square shapes, non-finite entries and
    /// diagonals more than [`DIAGONAL_TOLERANCE`] away from 1.
    pub fn new(values: Vec<Vec<f64>>) -> Result<Self> {
        let dim = values.len();
        for (row, entries) in values.iter().enumerate() {
            if entries.len() != dim {
                return Err(Error::NotSquare {
                    row,
                    len: entries.len(),
                    dim,
                });
            }
            if entries.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite("transfer matrix entry"));
            }
        }
        for (i, entries) in values.iter().enumerate() {
            if libm::fabs(entries[i] - 1.0) > DIAGONAL_TOLERANCE {
                return Err(Error::BadDiagonal {
                    index: i,
                    value: entries[i],
                });
            }
        }
        Ok(TransferMatrix { values })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, source: usize, target: usize) -> f64 {
        self.values[source][target]
    }

    pub fn row(&self, source: usize) -> &[f64] {
        &self.values[source]
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }
}

/// Per-task aggregate informativeness I_i and reduction rate beta_i.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InformationProfile {
    pub informativeness: Vec<f64>,
    pub beta: Vec<f64>,
}

impl InformationProfile {
    pub fn new(informativeness: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        let profile = InformationProfile {
            informativeness,
            beta,
        };
        profile.validate()?;
        Ok(profile)
    }

    pub fn validate(&self) -> Result<()> {
        if self.beta.len() != self.informativeness.len() {
            return Err(Error::LengthMismatch {
                what: "profile beta",
                expected: self.informativeness.len(),
                got: self.beta.len(),
            });
        }
        if self.informativeness.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("informativeness"));
        }
        for &b in &self.beta {
            if !(0.0..=1.0).contains(&b) {
                return Err(Error::BetaOutOfRange(b));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.informativeness.len()
    }

    pub fn is_empty(&self) -> bool {
        self.informativeness.is_empty()
    }
}

/// Per-task label counts with the budget they spend and the modelled
/// objective value they achieve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Allocation {
    pub counts: Vec<u64>,
    pub spent: u64,
    pub objective: f64,
}

/// One probe observation: task `target`'s score after briefly training
/// jointly with `source`, with two reference scores for normalization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeRecord {
    pub step: u64,
    pub source: usize,
    pub target: usize,
    /// Target score after joint training with (source, target).
    pub score_joint: f64,
    /// Target score after training on two target mini-batches.
    pub score_self_pair: f64,
    /// Target score after training on the target alone.
    pub score_base: f64,
}

/// One point of a learning curve: the observed score improvement after
/// adding `n` (pseudo-)labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub n: u64,
    pub gain: f64,
}

/// Observed score improvements for one task at increasing label counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearningCurve {
    pub task: String,
    pub points: Vec<CurvePoint>,
}

/// A task score before and after spending the budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScorePair {
    pub before: f64,
    pub after: f64,
}
