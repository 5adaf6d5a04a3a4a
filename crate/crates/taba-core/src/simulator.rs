//! A synthetic multi-task world.
//!
//! Maps an allocation to task scores under the same information model the
//! allocator optimizes, scaled into score units: task j's score moves by
//! `gain_scale_j * sum_i transfer[i][j] * (1 - beta_i^N_i) / (1 - beta_i)`
//! (towards better, respecting the task's metric orientation), plus optional
//! Gaussian noise. With a matching profile and zero noise the allocator's
//! proxy objective and the simulated outcome coincide by construction, which
//! turns "the optimized allocation beats the baselines" into a checkable
//! property instead of a training run.
//!
//! Noise stream: ChaCha8 seeded with the world seed, one Box-Muller draw
//! (cosine branch) per task in task order.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::allocator::{
    baseline_equal_budget, baseline_equal_images, baseline_same_images, baseline_single_task,
    solve_auto,
};
use crate::error::{Error, Result};
use crate::infomodel::gather_unchecked;
use crate::metrics::{overall_gain, relative_gain};
use crate::types::{Allocation, InformationProfile, ScorePair, TaskSet, TransferMatrix};

/// Ground truth for the synthetic world.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimWorld {
    pub task_set: TaskSet,
    pub true_transfer: TransferMatrix,
    pub true_beta: Vec<f64>,
    /// Score of each task before spending any budget (S'_i, positive).
    pub base_scores: Vec<f64>,
    /// Score units per unit of information received.
    pub gain_scale: Vec<f64>,
    pub noise_std: f64,
    pub seed: u64,
}

impl SimWorld {
    pub fn validate(&self) -> Result<()> {
        let k = self.task_set.len();
        if self.true_transfer.dim() != k {
            return Err(Error::InvalidWorld("transfer matrix dimension != task count"));
        }
        for (name, values) in [
            ("true_beta", &self.true_beta),
            ("base_scores", &self.base_scores),
            ("gain_scale", &self.gain_scale),
        ] {
            if values.len() != k {
                return Err(Error::LengthMismatch {
                    what: "world field",
                    expected: k,
                    got: values.len(),
                });
            }
            if values.iter().any(|v| !v.is_finite()) {
                let _ = name;
                return Err(Error::NonFinite("world field"));
            }
        }
        for &b in &self.true_beta {
            if !(0.0..=1.0).contains(&b) {
                return Err(Error::BetaOutOfRange(b));
            }
        }
        if self.base_scores.iter().any(|&s| s <= 0.0) {
            return Err(Error::InvalidWorld("base_scores must be positive"));
        }
        if self.noise_std.is_nan() || self.noise_std < 0.0 {
            return Err(Error::InvalidWorld("noise_std must be non-negative"));
        }
        Ok(())
    }

    /// The world's own parameters as an information profile (row sums of the
    /// true transfer matrix plus the true reduction rates).
    pub fn truth_profile(&self) -> InformationProfile {
        InformationProfile {
            informativeness: crate::infomodel::aggregate_informativeness(&self.true_transfer),
            beta: self.true_beta.clone(),
        }
    }
}

fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller, cosine branch. u1 in (0, 1], u2 in [0, 1).
    let u1 = 1.0 - (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
    let u2 = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
    libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(2.0 * core::f64::consts::PI * u2)
}

/// Simulates scores for an allocation, seeding the noise stream explicitly.
pub fn simulate_scores_seeded(world: &SimWorld, counts: &[u64], seed: u64) -> Result<Vec<ScorePair>> {
    world.validate()?;
    let k = world.task_set.len();
    if counts.len() != k {
        return Err(Error::LengthMismatch {
            what: "counts",
            expected: k,
            got: counts.len(),
        });
    }
    let spent: u64 = counts
        .iter()
        .zip(world.task_set.costs())
        .map(|(&n, c)| n * c)
        .sum();
    if spent > world.task_set.budget {
        return Err(Error::Infeasible {
            spent,
            budget: world.task_set.budget,
        });
    }

    // Information "units" emitted by each source task, then routed through
    // the transfer matrix.
    let units: Vec<f64> = counts
        .iter()
        .zip(&world.true_beta)
        .map(|(&n, &beta)| gather_unchecked(1.0, beta, n))
        .collect();

    let mut noise = alloc::vec![0.0f64; k];
    if world.noise_std > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for slot in noise.iter_mut() {
            *slot = world.noise_std * standard_normal(&mut rng);
        }
    }

    Ok((0..k)
        .map(|j| {
            let received: f64 = (0..k).map(|i| world.true_transfer.get(i, j) * units[i]).sum();
            let improvement = world.gain_scale[j] * received;
            let direction = if world.task_set.tasks[j].lower_is_better {
                -1.0
            } else {
                1.0
            };
            let before = world.base_scores[j];
            ScorePair {
                before,
                after: before + direction * improvement + noise[j],
            }
        })
        .collect())
}

/// Simulates scores using the world's own seed.
pub fn simulate_scores(world: &SimWorld, counts: &[u64]) -> Result<Vec<ScorePair>> {
    simulate_scores_seeded(world, counts, world.seed)
}

/// One strategy's allocation and its simulated outcome.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrategyRow {
    pub strategy: String,
    /// Set for the optimized row: which solver the scale rule picked.
    pub solver: Option<&'static str>,
    pub counts: Vec<u64>,
    pub spent: u64,
    pub objective: f64,
    /// Per-task relative gains, percent.
    pub task_gains: Vec<f64>,
    /// Task-averaged relative gain, percent.
    pub overall_gain: f64,
}

/// One point of the two-task budget-split sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub split_fraction: f64,
    pub delta_t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrategyReport {
    pub rows: Vec<StrategyRow>,
    pub sweep: Option<Vec<SweepPoint>>,
}

#[derive(Debug, Clone, Copy)]
pub struct CompareOptions {
    pub dp_cell_limit: u64,
    /// When set, also run the two-task budget-split sweep with this many
    /// points.
    pub sweep_steps: Option<usize>,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions {
            dp_cell_limit: crate::allocator::DEFAULT_DP_CELL_LIMIT,
            sweep_steps: None,
        }
    }
}

fn row_from_allocation(
    world: &SimWorld,
    strategy: String,
    solver: Option<&'static str>,
    allocation: &Allocation,
    seed: u64,
) -> Result<StrategyRow> {
    let pairs = simulate_scores_seeded(world, &allocation.counts, seed)?;
    let gains: Vec<f64> = pairs
        .iter()
        .zip(&world.task_set.tasks)
        .map(|(pair, task)| relative_gain(pair, task.lower_is_better))
        .collect::<Result<_>>()?;
    let delta_t = overall_gain(&gains)?;
    Ok(StrategyRow {
        strategy,
        solver,
        counts: allocation.counts.clone(),
        spent: allocation.spent,
        objective: allocation.objective,
        task_gains: gains,
        overall_gain: delta_t,
    })
}

/// Runs the optimized allocation and every baseline through the simulator.
///
/// Strategies use derived seeds (world seed + row index) so noisy runs stay
/// reproducible but independent across rows.
pub fn compare_strategies(
    world: &SimWorld,
    prof: &InformationProfile,
    options: &CompareOptions,
) -> Result<StrategyReport> {
    world.validate()?;
    let ts = &world.task_set;

    let (taba, solver) = solve_auto(ts, prof, options.dp_cell_limit)?;
    let mut planned: Vec<(String, Option<&'static str>, Allocation)> = Vec::new();
    planned.push((String::from("taba"), Some(solver.as_str()), taba));
    planned.push((
        String::from("equal_new_images"),
        None,
        baseline_equal_images(ts, prof)?,
    ));
    planned.push((
        String::from("equal_budget"),
        None,
        baseline_equal_budget(ts, prof)?,
    ));
    for (i, task) in ts.tasks.iter().enumerate() {
        planned.push((
            format!("single_task_{}", task.id),
            None,
            baseline_single_task(ts, prof, i)?,
        ));
    }
    // Same counts as equal_new_images; the model has no shared-image
    // correlation term, so the row differs only in labeling semantics.
    planned.push((
        String::from("same_images"),
        None,
        baseline_same_images(ts, prof)?,
    ));

    let rows = planned
        .into_iter()
        .enumerate()
        .map(|(index, (strategy, solver, allocation))| {
            row_from_allocation(world, strategy, solver, &allocation, world.seed + index as u64)
        })
        .collect::<Result<Vec<_>>>()?;

    let sweep = match options.sweep_steps {
        Some(steps) => Some(budget_split_sweep(world, steps)?),
        None => None,
    };

    Ok(StrategyReport { rows, sweep })
}

/// Dense sweep over two-task budget splits: fraction f of the budget goes
/// to the first task, the remainder to the second, both floored to whole
/// labels. Reproduces the shape of the grid-search experiment.
pub fn budget_split_sweep(world: &SimWorld, steps: usize) -> Result<Vec<SweepPoint>> {
    world.validate()?;
    let ts = &world.task_set;
    if ts.len() != 2 {
        return Err(Error::SweepRequiresTwoTasks(ts.len()));
    }
    let steps = steps.max(2);
    let budget = ts.budget;
    let mut points = Vec::with_capacity(steps);
    for s in 0..steps {
        // Exact integer split of the budget axis.
        let first_budget = (budget as u128 * s as u128 / (steps - 1) as u128) as u64;
        let n1 = first_budget / ts.tasks[0].cost;
        let n2 = (budget - n1 * ts.tasks[0].cost) / ts.tasks[1].cost;
        let counts = [n1, n2];
        let pairs = simulate_scores_seeded(world, &counts, world.seed.wrapping_add(1000 + s as u64))?;
        let gains: Vec<f64> = pairs
            .iter()
            .zip(&ts.tasks)
            .map(|(pair, task)| relative_gain(pair, task.lower_is_better))
            .collect::<Result<_>>()?;
        points.push(SweepPoint {
            split_fraction: s as f64 / (steps - 1) as f64,
            delta_t: overall_gain(&gains)?,
        });
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::TaskSpec;
    use alloc::vec;

    fn world_2task() -> SimWorld {
        SimWorld {
            task_set: TaskSet {
                tasks: vec![
                    TaskSpec {
                        id: "a".into(),
                        cost: 1,
                        lower_is_better: false,
                    },
                    TaskSpec {
                        id: "b".into(),
                        cost: 1,
                        lower_is_better: false,
                    },
                ],
                budget: 10,
            },
            true_transfer: TransferMatrix::new(vec![vec![1.0, 0.5], vec![0.0, 1.0]]).unwrap(),
            true_beta: vec![0.5, 1.0],
            base_scores: vec![1.0, 1.0],
            gain_scale: vec![1.0, 1.0],
            noise_std: 0.0,
            seed: 3,
        }
    }

    #[test]
    fn no_labels_no_change() {
        let world = world_2task();
        let pairs = simulate_scores(&world, &[0, 0]).unwrap();
        for pair in pairs {
            assert_eq!(pair.after, pair.before);
        }
    }

    #[test]
    fn linear_self_only_world() {
        let mut world = world_2task();
        world.true_transfer =
            TransferMatrix::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        world.true_beta = vec![1.0, 1.0];
        let pairs = simulate_scores(&world, &[4, 6]).unwrap();
        assert!((pairs[0].after - pairs[0].before - 4.0).abs() < 1e-12);
        assert!((pairs[1].after - pairs[1].before - 6.0).abs() < 1e-12);
    }

    #[test]
    fn transfer_world_example() {
        let world = world_2task();
        let pairs = simulate_scores(&world, &[2, 3]).unwrap();
        assert!((pairs[0].after - pairs[0].before - 1.5).abs() < 1e-12);
        assert!((pairs[1].after - pairs[1].before - 3.75).abs() < 1e-12);
    }

    #[test]
    fn lower_is_better_scores_move_down() {
        let mut world = world_2task();
        world.task_set.tasks[0].lower_is_better = true;
        let pairs = simulate_scores(&world, &[2, 0]).unwrap();
        assert!(pairs[0].after < pairs[0].before);
        let gain = relative_gain(&pairs[0], true).unwrap();
        assert!(gain > 0.0);
    }

    #[test]
    fn infeasible_counts_rejected() {
        let world = world_2task();
        assert!(matches!(
            simulate_scores(&world, &[11, 0]),
            Err(Error::Infeasible { .. })
        ));
    }

    #[test]
    fn noiseless_is_seed_independent_and_noisy_is_reproducible() {
        let mut world = world_2task();
        let a = simulate_scores_seeded(&world, &[3, 3], 1).unwrap();
        let b = simulate_scores_seeded(&world, &[3, 3], 999).unwrap();
        assert_eq!(a, b);

        world.noise_std = 0.1;
        let x = simulate_scores_seeded(&world, &[3, 3], 42).unwrap();
        let y = simulate_scores_seeded(&world, &[3, 3], 42).unwrap();
        let z = simulate_scores_seeded(&world, &[3, 3], 43).unwrap();
        assert_eq!(x, y);
        assert_ne!(x, z);
    }

    #[test]
    fn gain_monotone_in_positive_transfer_counts() {
        let world = world_2task();
        let mut previous = f64::NEG_INFINITY;
        for n in 0..=10u64 {
            let pairs = simulate_scores(&world, &[n, 0]).unwrap();
            let gain = pairs[1].after - pairs[1].before;
            assert!(gain >= previous);
            previous = gain;
        }
    }

    #[test]
    fn taba_row_dominates_when_profile_matches_truth() {
        let world = world_2task();
        let prof = world.truth_profile();
        let report = compare_strategies(&world, &prof, &CompareOptions::default()).unwrap();
        let taba = &report.rows[0];
        assert_eq!(taba.strategy, "taba");
        for row in &report.rows[1..] {
            assert!(
                taba.overall_gain >= row.overall_gain - 1e-9,
                "{} beats taba: {} vs {}",
                row.strategy,
                row.overall_gain,
                taba.overall_gain
            );
            assert!(taba.objective >= row.objective - 1e-9);
        }
    }

    #[test]
    fn sweep_requires_two_tasks() {
        let mut world = world_2task();
        world.task_set.tasks.push(TaskSpec {
            id: "c".into(),
            cost: 1,
            lower_is_better: false,
        });
        // keep the world internally consistent
        world.true_transfer = TransferMatrix::new(vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        world.true_beta = vec![0.5, 0.5, 0.5];
        world.base_scores = vec![1.0; 3];
        world.gain_scale = vec![1.0; 3];
        assert!(matches!(
            budget_split_sweep(&world, 21),
            Err(Error::SweepRequiresTwoTasks(3))
        ));
    }

    #[test]
    fn sweep_covers_both_endpoints() {
        let world = world_2task();
        let points = budget_split_sweep(&world, 21).unwrap();
        assert_eq!(points.len(), 21);
        assert_eq!(points[0].split_fraction, 0.0);
        assert_eq!(points[20].split_fraction, 1.0);
    }
}
