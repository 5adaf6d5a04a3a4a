//! Budget-constrained informativeness maximization.
//!
//! The objective is separable and concave per task: label k of task i is
//! worth `beta_i^(k-1) * I_i`, so any optimal purchase is a per-task prefix
//! and the problem is a bounded knapsack over the integer budget grid.
//!
//! Two solvers:
//!
//! * [`solve_dp`] — exact. Processes tasks one at a time; each transition is
//!   a max-plus convolution of the suffix table with the concave per-task
//!   value curve, evaluated per cost-residue class with divide-and-conquer
//!   over the monotone argmax. Cost is O(B log(B/c)) per task rather than
//!   the naive O(B^2 / c).
//! * [`solve_greedy`] — scalable surrogate: buys the label with the best
//!   marginal value per budget unit until nothing affordable improves the
//!   objective, then does one pass of pairwise swap refinement. Exact for
//!   equal costs; near-optimal otherwise (certify with
//!   [`continuous_upper_bound`]).
//!
//! Ties everywhere resolve to the lowest task index; among equally good DP
//! optima the lexicographically smallest count vector wins.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::infomodel::{gather_unchecked, marginal_unchecked, BETA_ONE_EPS};
use crate::types::{Allocation, InformationProfile, TaskSet};

/// Default ceiling on estimated DP cell updates before the auto rule falls
/// back to the greedy solver.
pub const DEFAULT_DP_CELL_LIMIT: u64 = 10_000_000;

/// Which solver produced an allocation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    Dp,
    Greedy,
}

impl SolverKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolverKind::Dp => "dp",
            SolverKind::Greedy => "greedy",
        }
    }
}

fn validate_inputs(ts: &TaskSet, prof: &InformationProfile) -> Result<()> {
    if ts.tasks.iter().any(|t| t.cost == 0) {
        return Err(Error::InvalidTaskSet("cost must be ≥ 1"));
    }
    prof.validate()?;
    if prof.len() != ts.len() {
        return Err(Error::LengthMismatch {
            what: "profile",
            expected: ts.len(),
            got: prof.len(),
        });
    }
    Ok(())
}

/// Total modelled information of a count vector. No feasibility check;
/// callers compare spend against the budget separately.
pub fn objective(ts: &TaskSet, prof: &InformationProfile, counts: &[u64]) -> Result<f64> {
    validate_inputs(ts, prof)?;
    if counts.len() != ts.len() {
        return Err(Error::LengthMismatch {
            what: "counts",
            expected: ts.len(),
            got: counts.len(),
        });
    }
    Ok(counts
        .iter()
        .enumerate()
        .map(|(i, &n)| gather_unchecked(prof.informativeness[i], prof.beta[i], n))
        .sum())
}

impl Allocation {
    /// Builds a feasible allocation, recomputing spend and objective.
    pub fn from_counts(ts: &TaskSet, prof: &InformationProfile, counts: Vec<u64>) -> Result<Self> {
        let value = objective(ts, prof, &counts)?;
        let spent: u64 = counts
            .iter()
            .zip(ts.costs())
            .map(|(&n, c)| n * c)
            .sum();
        if spent > ts.budget {
            return Err(Error::Infeasible {
                spent,
                budget: ts.budget,
            });
        }
        Ok(Allocation {
            counts,
            spent,
            objective: value,
        })
    }
}

/// Estimated DP cell updates for an instance: per task, the budget grid is
/// swept once per divide-and-conquer level, and there are about
/// log2(B/c + 1) + 1 levels with two scans each.
pub fn dp_cost_estimate(ts: &TaskSet) -> u64 {
    let budget = ts.budget;
    let mut total: u64 = 0;
    for cost in ts.costs() {
        let copies = budget / cost.max(1);
        let levels = u64::BITS as u64 - u64::from((copies + 1).leading_zeros());
        total = total.saturating_add(2u64.saturating_mul(budget.saturating_add(1)).saturating_mul(levels));
    }
    total
}

/// Divide-and-conquer over one cost-residue class of the budget grid.
///
/// `dp_curr[r + m*cost] = max_j g[m - j] + dp_next[r + j*cost]`, where `j`
/// is the number of cost units left for the remaining tasks. With `g`
/// concave the matrix `M[m][j]` satisfies the inverse Monge condition in
/// `(m, j)`, so the largest argmax `j` is non-decreasing in `m` and each
/// half of the row range only needs the matching half of the candidate
/// range. Preferring the largest `j` means the smallest label count, which
/// backtracks to the lexicographically smallest optimum.
#[allow(clippy::too_many_arguments)]
fn convolve_class(
    m_lo: usize,
    m_hi: usize,
    j_lo: usize,
    j_hi: usize,
    residue: usize,
    cost: usize,
    g: &[f64],
    dp_next: &[f64],
    dp_curr: &mut [f64],
    choice: &mut [usize],
) {
    if m_lo > m_hi {
        return;
    }
    let mid = m_lo + (m_hi - m_lo) / 2;
    let b = residue + mid * cost;
    let mut best_j = j_lo;
    let mut best_v = f64::NEG_INFINITY;
    for j in j_lo..=j_hi.min(mid) {
        let v = g[mid - j] + dp_next[residue + j * cost];
        if v >= best_v {
            best_v = v;
            best_j = j;
        }
    }
    dp_curr[b] = best_v;
    choice[b] = mid - best_j;
    if mid > m_lo {
        convolve_class(m_lo, mid - 1, j_lo, best_j, residue, cost, g, dp_next, dp_curr, choice);
    }
    if mid < m_hi {
        convolve_class(mid + 1, m_hi, best_j, j_hi, residue, cost, g, dp_next, dp_curr, choice);
    }
}

/// Exact solve by dynamic programming.
///
/// Returns the feasible allocation maximizing the objective; among optima
/// the lexicographically smallest count vector by task index. Tasks with
/// non-positive informativeness never receive labels (buying them cannot
/// increase the objective). Errors with [`Error::DpTooLarge`] when the
/// estimated work exceeds `cell_limit`.
pub fn solve_dp(ts: &TaskSet, prof: &InformationProfile, cell_limit: u64) -> Result<Allocation> {
    validate_inputs(ts, prof)?;
    let estimated = dp_cost_estimate(ts);
    if estimated > cell_limit {
        return Err(Error::DpTooLarge {
            estimated,
            limit: cell_limit,
        });
    }

    let k = ts.len();
    let budget = ts.budget as usize;
    let mut choices: Vec<Vec<usize>> = Vec::with_capacity(k);
    choices.resize_with(k, || vec![0usize; budget + 1]);

    // Suffix tables: dp_next holds the best objective of tasks i+1..K per
    // residual budget. Choosing the smallest argmax at every level makes the
    // backtracked vector lexicographically smallest.
    let mut dp_next = vec![0.0f64; budget + 1];
    for i in (0..k).rev() {
        let cost = ts.tasks[i].cost as usize;
        let info = prof.informativeness[i];
        let beta = prof.beta[i];
        if info <= 0.0 || cost > budget || budget == 0 {
            continue; // dp_curr would equal dp_next with all-zero choices
        }
        let max_n = budget / cost;
        let g: Vec<f64> = (0..=max_n)
            .map(|n| gather_unchecked(info, beta, n as u64))
            .collect();
        let mut dp_curr = vec![0.0f64; budget + 1];
        for residue in 0..cost {
            let m_hi = (budget - residue) / cost;
            convolve_class(
                0,
                m_hi,
                0,
                m_hi,
                residue,
                cost,
                &g,
                &dp_next,
                &mut dp_curr,
                &mut choices[i],
            );
        }
        dp_next = dp_curr;
    }

    let mut counts = vec![0u64; k];
    let mut b = budget;
    for i in 0..k {
        let n = choices[i][b];
        counts[i] = n as u64;
        b -= n * ts.tasks[i].cost as usize;
    }
    Allocation::from_counts(ts, prof, counts)
}

/// Greedy marginal selection with one pass of pairwise swap refinement.
///
/// Repeatedly buys the label with the highest marginal value per budget
/// unit among affordable tasks with positive marginal; then for every
/// ordered task pair tries moving one label from `a` to as many labels of
/// `b` as the freed budget buys, keeping the move if the objective
/// strictly improves.
pub fn solve_greedy(ts: &TaskSet, prof: &InformationProfile) -> Result<Allocation> {
    validate_inputs(ts, prof)?;
    let k = ts.len();
    let mut counts = vec![0u64; k];
    let mut remaining = ts.budget;

    loop {
        let mut best: Option<(f64, usize)> = None;
        for (i, task) in ts.tasks.iter().enumerate() {
            if task.cost > remaining {
                continue;
            }
            let m = marginal_unchecked(prof.informativeness[i], prof.beta[i], counts[i]);
            if m <= 0.0 {
                continue;
            }
            let ratio = m / task.cost as f64;
            if best.is_none_or(|(r, _)| ratio > r) {
                best = Some((ratio, i));
            }
        }
        match best {
            Some((_, i)) => {
                counts[i] += 1;
                remaining -= ts.tasks[i].cost;
            }
            None => break,
        }
    }

    let mut current = objective(ts, prof, &counts)?;
    for a in 0..k {
        for b in 0..k {
            if a == b || counts[a] == 0 {
                continue;
            }
            let freed = remaining + ts.tasks[a].cost;
            let extra = freed / ts.tasks[b].cost;
            if extra == 0 {
                continue;
            }
            let mut candidate = counts.clone();
            candidate[a] -= 1;
            candidate[b] += extra;
            let value = objective(ts, prof, &candidate)?;
            if value > current {
                counts = candidate;
                remaining = freed - extra * ts.tasks[b].cost;
                current = value;
            }
        }
    }
    Allocation::from_counts(ts, prof, counts)
}

/// Scale rule: exact DP when the estimated work fits the cell limit,
/// greedy otherwise.
pub fn solve_auto(
    ts: &TaskSet,
    prof: &InformationProfile,
    cell_limit: u64,
) -> Result<(Allocation, SolverKind)> {
    if dp_cost_estimate(ts) <= cell_limit {
        Ok((solve_dp(ts, prof, cell_limit)?, SolverKind::Dp))
    } else {
        Ok((solve_greedy(ts, prof)?, SolverKind::Greedy))
    }
}

/// Same label count for every task: `floor(B / sum(c))`.
pub fn baseline_equal_images(ts: &TaskSet, prof: &InformationProfile) -> Result<Allocation> {
    let total_cost: u64 = ts.costs().sum();
    if total_cost == 0 {
        return Err(Error::InvalidTaskSet("sum of costs must be positive"));
    }
    let n = ts.budget / total_cost;
    Allocation::from_counts(ts, prof, vec![n; ts.len()])
}

/// Budget split evenly across tasks, then converted to counts:
/// `floor((B/K) / c_i)` with the division carried out exactly.
pub fn baseline_equal_budget(ts: &TaskSet, prof: &InformationProfile) -> Result<Allocation> {
    let k = ts.len() as u64;
    if k == 0 {
        return Err(Error::InvalidTaskSet("task set is empty"));
    }
    let counts = ts.costs().map(|c| ts.budget / (k * c)).collect();
    Allocation::from_counts(ts, prof, counts)
}

/// The whole budget on one task: `floor(B / c_i)` there, zero elsewhere.
pub fn baseline_single_task(
    ts: &TaskSet,
    prof: &InformationProfile,
    index: usize,
) -> Result<Allocation> {
    if index >= ts.len() {
        return Err(Error::BadTaskIndex {
            index,
            tasks: ts.len(),
        });
    }
    let mut counts = vec![0u64; ts.len()];
    counts[index] = ts.budget / ts.tasks[index].cost;
    Allocation::from_counts(ts, prof, counts)
}

/// Same arithmetic as [`baseline_equal_images`], but semantically all tasks
/// label the *same* image set. The information model carries no shared-image
/// correlation term, so the counts and objective coincide with the
/// equal-images baseline; reports keep it as a distinct strategy row.
pub fn baseline_same_images(ts: &TaskSet, prof: &InformationProfile) -> Result<Allocation> {
    baseline_equal_images(ts, prof)
}

/// Lagrangian upper bound on the integer optimum from the continuous
/// relaxation: `min over lambda of sum_i sup_n [g_i(n) - lambda c_i n] +
/// lambda B`, minimized by ternary search (the dual is convex in lambda).
pub fn continuous_upper_bound(ts: &TaskSet, prof: &InformationProfile) -> Result<f64> {
    validate_inputs(ts, prof)?;
    let k = ts.len();
    let budget = ts.budget as f64;

    let dual = |lambda: f64| -> f64 {
        let mut total = lambda * budget;
        for i in 0..k {
            let info = prof.informativeness[i];
            if info <= 0.0 {
                continue;
            }
            let beta = prof.beta[i];
            let cost = ts.tasks[i].cost as f64;
            if 1.0 - beta < BETA_ONE_EPS {
                // Linear task: the supremum is 0 whenever lambda >= I/c;
                // the search domain below keeps lambda in that region.
                continue;
            }
            if beta == 0.0 {
                total += (info - lambda * cost).max(0.0);
                continue;
            }
            let ln_beta = libm::log(beta);
            let slope0 = -ln_beta / (1.0 - beta) * info;
            if slope0 <= lambda * cost {
                continue;
            }
            // beta^n at the stationary point of g(n) - lambda c n.
            let pow = lambda * cost * (1.0 - beta) / (-ln_beta * info);
            let n_star = libm::log(pow) / ln_beta;
            total += (1.0 - pow) / (1.0 - beta) * info - lambda * cost * n_star;
        }
        total
    };

    let mut lo = 0.0f64;
    let mut hi = 0.0f64;
    for i in 0..k {
        let info = prof.informativeness[i];
        if info <= 0.0 {
            continue;
        }
        let beta = prof.beta[i];
        let cost = ts.tasks[i].cost as f64;
        if 1.0 - beta < BETA_ONE_EPS {
            lo = lo.max(info / cost);
            hi = hi.max(info / cost);
        } else {
            let slope0 = if beta == 0.0 {
                info
            } else {
                -libm::log(beta) / (1.0 - beta) * info
            };
            hi = hi.max(slope0 / cost);
        }
    }

    let mut a = lo;
    let mut b = hi.max(lo);
    for _ in 0..300 {
        let x1 = a + (b - a) / 3.0;
        let x2 = b - (b - a) / 3.0;
        if dual(x1) <= dual(x2) {
            b = x2;
        } else {
            a = x1;
        }
    }
    Ok(dual(a).min(dual(b)).min(dual(lo)))
}
