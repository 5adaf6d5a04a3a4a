//! Label-budget allocation for multi-task learning.
//!
//! Given a set of tasks with per-label costs, a transfer matrix describing
//! how much a label for one task helps the others, and per-task reduction
//! rates modelling diminishing returns, this crate answers the question:
//! how many new labels should each task receive so that the total modelled
//! information gained from a fixed budget is maximal?
//!
//! The pipeline:
//!
//! 1. [`relatedness`] turns probe logs (score deltas observed while jointly
//!    training task pairs) into a [`types::TransferMatrix`].
//! 2. [`infomodel`] aggregates per-task informativeness and evaluates the
//!    geometric diminishing-returns gather function.
//! 3. [`betafit`] fits the reduction rate of a task from a learning curve.
//! 4. [`allocator`] solves the budget-constrained maximization exactly by
//!    dynamic programming at small scale, or by greedy marginal selection
//!    with swap refinement at large scale, and provides heuristic baselines.
//! 5. [`simulator`] maps allocations to synthetic task scores so strategies
//!    can be compared without training anything.
//!
//! The crate is `no_std` (with `alloc`); all IO and file formats live in the
//! companion CLI crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod allocator;
pub mod betafit;
pub mod error;
pub mod infomodel;
pub mod metrics;
pub mod relatedness;
pub mod simulator;
pub mod types;

pub use error::{Error, Result};
pub use types::{
    Allocation, CurvePoint, InformationProfile, LearningCurve, ProbeRecord, ScorePair, TaskSet,
    TaskSpec, TransferMatrix,
};
