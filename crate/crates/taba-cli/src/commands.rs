//! Subcommand implementations.
//!
//! Exit codes: 0 success, 2 unreadable/invalid input file, 3 incomplete
//! probe log, 4 insufficient curve points, 5 DP forced on an oversized
//! instance, 6 sweep requested on a world without exactly two tasks, 1
//! anything else. Diagnostics go to stderr, reports to stdout.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;

use taba_core::allocator::{
    continuous_upper_bound, solve_auto, solve_dp, solve_greedy, SolverKind,
};
use taba_core::betafit::fit_reduction_rate;
use taba_core::infomodel::{aggregate_informativeness, marginal};
use taba_core::relatedness::estimate_transfer;
use taba_core::simulator::{compare_strategies, CompareOptions, StrategyReport, SweepPoint};
use taba_core::types::validate_task_set;
use taba_core::{Allocation, Error, InformationProfile, LearningCurve, ProbeRecord, TaskSet};

use crate::formats::{
    AllocationFile, FitFile, OrderedMap, ReportFile, ReportRow, Scenario, TransferFile,
};
use crate::jsonio::{fmt_float, to_json_string};
use crate::{RunArgs, SimulateArgs, SolverArg};

pub struct CmdError {
    pub code: i32,
    pub message: String,
}

pub type CmdResult<T = ()> = Result<T, CmdError>;

fn fail<T>(code: i32, message: impl Into<String>) -> CmdResult<T> {
    Err(CmdError {
        code,
        message: message.into(),
    })
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::IncompletePair { .. } => 3,
        Error::InsufficientData { .. } => 4,
        Error::DpTooLarge { .. } => 5,
        Error::SweepRequiresTwoTasks(_) => 6,
        _ => 1,
    }
}

fn domain(err: Error) -> CmdError {
    CmdError {
        code: exit_code(&err),
        message: err.to_string(),
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> CmdResult<T> {
    let text = match fs::read_to_string(path) {
        Ok(text) => text,
        Err(err) => return fail(2, format!("cannot read {}: {err}", path.display())),
    };
    match serde_json::from_str(&text) {
        Ok(value) => Ok(value),
        Err(err) => fail(2, format!("cannot parse {}: {err}", path.display())),
    }
}

fn write_text(path: &Path, text: &str) -> CmdResult {
    match fs::write(path, text) {
        Ok(()) => Ok(()),
        Err(err) => fail(1, format!("cannot write {}: {err}", path.display())),
    }
}

fn write_out(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(path) => write_text(path, text),
        None => Ok(()),
    }
}

fn checked_task_set(ts: &TaskSet, origin: &Path) -> CmdResult {
    let report = validate_task_set(ts);
    if report.ok() {
        Ok(())
    } else {
        fail(
            2,
            format!(
                "invalid task set in {}: {}",
                origin.display(),
                report.violations.join("; ")
            ),
        )
    }
}

fn scenario_task_set(scenario: &Scenario, origin: &Path) -> CmdResult<TaskSet> {
    let ts = scenario
        .task_set
        .clone()
        .or_else(|| scenario.world.as_ref().map(|w| w.task_set.clone()));
    match ts {
        Some(ts) => {
            checked_task_set(&ts, origin)?;
            Ok(ts)
        }
        None => fail(
            2,
            format!("{}: scenario has neither task_set nor world", origin.display()),
        ),
    }
}

fn ids(ts: &TaskSet) -> Vec<String> {
    ts.tasks.iter().map(|t| t.id.clone()).collect()
}

fn ordered<V: Copy>(ids: &[String], values: &[V]) -> OrderedMap<V> {
    OrderedMap(
        ids.iter()
            .cloned()
            .zip(values.iter().copied())
            .collect(),
    )
}

pub fn cmd_relatedness(log: &Path, tasks: usize, out: Option<&Path>) -> CmdResult {
    let records: Vec<ProbeRecord> = read_json(log)?;
    let matrix = estimate_transfer(&records, tasks).map_err(domain)?;
    let informativeness = aggregate_informativeness(&matrix);

    let display: Vec<String> = informativeness.iter().map(|v| format!("{v:.4}")).collect();
    println!("I = ({})", display.join(", "));

    let file = TransferFile {
        values: matrix.values().to_vec(),
        informativeness,
    };
    write_out(out, &to_json_string(&file))
}

pub fn cmd_fit_beta(curve: &Path, out: Option<&Path>) -> CmdResult {
    let curve: LearningCurve = read_json(curve)?;
    let fit = fit_reduction_rate(&curve).map_err(domain)?;
    println!(
        "task {}: beta = {:.6}, ds = {:.6}, residual = {:.3e}",
        curve.task, fit.beta, fit.ds, fit.residual
    );
    let file = FitFile {
        beta: fit.beta,
        ds: fit.ds,
        residual: fit.residual,
    };
    write_out(out, &to_json_string(&file))
}

fn solve(
    ts: &TaskSet,
    prof: &InformationProfile,
    solver: SolverArg,
    dp_cell_limit: u64,
) -> CmdResult<(Allocation, SolverKind)> {
    match solver {
        SolverArg::Auto => solve_auto(ts, prof, dp_cell_limit).map_err(domain),
        SolverArg::Dp => solve_dp(ts, prof, dp_cell_limit)
            .map(|a| (a, SolverKind::Dp))
            .map_err(domain),
        SolverArg::Greedy => solve_greedy(ts, prof)
            .map(|a| (a, SolverKind::Greedy))
            .map_err(domain),
    }
}

fn allocation_table(ts: &TaskSet, prof: &InformationProfile, alloc: &Allocation) -> String {
    let mut text = String::new();
    let _ = writeln!(text, "{:<12} {:>10} {:>10} {:>16}", "task", "count", "cost", "marginal_at_stop");
    for (i, task) in ts.tasks.iter().enumerate() {
        let m = marginal(prof.informativeness[i], prof.beta[i], alloc.counts[i]).unwrap_or(f64::NAN);
        let _ = writeln!(
            text,
            "{:<12} {:>10} {:>10} {:>16.6}",
            task.id,
            alloc.counts[i],
            alloc.counts[i] * task.cost,
            m
        );
    }
    let _ = writeln!(text, "spent {} of {} budget units", alloc.spent, ts.budget);
    let _ = writeln!(text, "objective {:.6}", alloc.objective);
    text
}

pub fn cmd_allocate(
    scenario_path: &Path,
    solver: SolverArg,
    dp_cell_limit: u64,
    out: Option<&Path>,
) -> CmdResult {
    let scenario: Scenario = read_json(scenario_path)?;
    let ts = scenario_task_set(&scenario, scenario_path)?;
    let prof = match &scenario.profile {
        Some(prof) => prof.clone(),
        None => return fail(2, format!("{}: scenario has no profile", scenario_path.display())),
    };

    let (alloc, kind) = solve(&ts, &prof, solver, dp_cell_limit)?;
    print!("{}", allocation_table(&ts, &prof, &alloc));
    println!("solver: {}", kind.as_str());
    if kind == SolverKind::Greedy {
        let bound = continuous_upper_bound(&ts, &prof).map_err(domain)?;
        println!(
            "continuous upper bound {:.6}, gap {:.6}",
            bound,
            bound - alloc.objective
        );
    }

    let task_ids = ids(&ts);
    let file = AllocationFile {
        counts: ordered(&task_ids, &alloc.counts),
        spent: alloc.spent,
        objective: alloc.objective,
        solver: kind.as_str().to_string(),
    };
    write_out(out, &to_json_string(&file))
}

fn report_file(report: &StrategyReport, task_ids: &[String]) -> ReportFile {
    ReportFile {
        rows: report
            .rows
            .iter()
            .map(|row| ReportRow {
                strategy: row.strategy.clone(),
                solver: row.solver.map(|s| s.to_string()),
                counts: ordered(task_ids, &row.counts),
                spent: row.spent,
                objective: row.objective,
                task_gains: ordered(task_ids, &row.task_gains),
                overall_gain: row.overall_gain,
            })
            .collect(),
    }
}

fn report_table(report: &StrategyReport) -> String {
    let mut text = String::new();
    let _ = writeln!(text, "{:<24} {:>12} {:>14} {:>12}", "strategy", "spent", "objective", "delta_t");
    for row in &report.rows {
        let _ = writeln!(
            text,
            "{:<24} {:>12} {:>14.6} {:>11.4}%",
            row.strategy, row.spent, row.objective, row.overall_gain
        );
    }
    text
}

fn sweep_csv(points: &[SweepPoint]) -> String {
    let mut text = String::from("split_fraction,delta_t\n");
    for point in points {
        let _ = writeln!(text, "{},{}", fmt_float(point.split_fraction), fmt_float(point.delta_t));
    }
    text
}

pub fn cmd_simulate(args: &SimulateArgs) -> CmdResult {
    let scenario: Scenario = read_json(&args.scenario)?;
    let mut world = match scenario.world.clone() {
        Some(world) => world,
        None => return fail(2, format!("{}: scenario has no world", args.scenario.display())),
    };
    checked_task_set(&world.task_set, &args.scenario)?;
    let prof = match &scenario.profile {
        Some(prof) => prof.clone(),
        None => return fail(2, format!("{}: scenario has no profile", args.scenario.display())),
    };
    if let Some(seed) = args.seed {
        world.seed = seed;
    }

    let options = CompareOptions {
        dp_cell_limit: args.dp_cell_limit,
        sweep_steps: args.sweep.then_some(args.sweep_steps),
    };
    let report = compare_strategies(&world, &prof, &options).map_err(domain)?;

    print!("{}", report_table(&report));
    let task_ids = ids(&world.task_set);
    write_out(args.out.as_deref(), &to_json_string(&report_file(&report, &task_ids)))?;

    if let Some(points) = &report.sweep {
        let csv = sweep_csv(points);
        match &args.sweep_out {
            Some(path) => write_text(path, &csv)?,
            None => print!("{csv}"),
        }
    }
    Ok(())
}

/// Derives the information profile for `run`: measured transfer and fitted
/// rates when the raw inputs are present, the scenario's own profile
/// otherwise.
fn derive_profile(
    scenario: &Scenario,
    ts: &TaskSet,
    origin: &Path,
    out_dir: &Path,
) -> CmdResult<InformationProfile> {
    let informativeness = match &scenario.probe_log {
        Some(records) => {
            let matrix = estimate_transfer(records, ts.len()).map_err(domain)?;
            let informativeness = aggregate_informativeness(&matrix);
            let file = TransferFile {
                values: matrix.values().to_vec(),
                informativeness: informativeness.clone(),
            };
            write_text(&out_dir.join("transfer.json"), &to_json_string(&file))?;
            informativeness
        }
        None => match &scenario.profile {
            Some(prof) => prof.informativeness.clone(),
            None => {
                return fail(2, format!("{}: scenario has neither probe_log nor profile", origin.display()))
            }
        },
    };

    let beta = match &scenario.curves {
        Some(curves) => {
            let mut beta = Vec::with_capacity(ts.len());
            for task in &ts.tasks {
                let curve = match curves.iter().find(|c| c.task == task.id) {
                    Some(curve) => curve,
                    None => return fail(2, format!("{}: no curve for task '{}'", origin.display(), task.id)),
                };
                beta.push(fit_reduction_rate(curve).map_err(domain)?.beta);
            }
            beta
        }
        None => match &scenario.profile {
            Some(prof) => prof.beta.clone(),
            None => {
                return fail(2, format!("{}: scenario has neither curves nor profile", origin.display()))
            }
        },
    };

    InformationProfile::new(informativeness, beta).map_err(domain)
}

pub fn cmd_run(args: &RunArgs) -> CmdResult {
    let scenario: Scenario = read_json(&args.scenario)?;
    let ts = scenario_task_set(&scenario, &args.scenario)?;
    if let Err(err) = fs::create_dir_all(&args.out) {
        return fail(1, format!("cannot create {}: {err}", args.out.display()));
    }

    let prof = derive_profile(&scenario, &ts, &args.scenario, &args.out)?;
    write_text(&args.out.join("profile.json"), &to_json_string(&prof))?;

    let (alloc, kind) = solve(&ts, &prof, args.solver, args.dp_cell_limit)?;
    print!("{}", allocation_table(&ts, &prof, &alloc));
    println!("solver: {}", kind.as_str());
    let task_ids = ids(&ts);
    let alloc_file = AllocationFile {
        counts: ordered(&task_ids, &alloc.counts),
        spent: alloc.spent,
        objective: alloc.objective,
        solver: kind.as_str().to_string(),
    };
    write_text(&args.out.join("allocation.json"), &to_json_string(&alloc_file))?;

    if let Some(world) = &scenario.world {
        let mut world = world.clone();
        if let Some(seed) = args.seed {
            world.seed = seed;
        }
        let options = CompareOptions {
            dp_cell_limit: args.dp_cell_limit,
            sweep_steps: args.sweep.then_some(args.sweep_steps),
        };
        let report = compare_strategies(&world, &prof, &options).map_err(domain)?;
        print!("{}", report_table(&report));
        write_text(
            &args.out.join("report.json"),
            &to_json_string(&report_file(&report, &task_ids)),
        )?;
        if let Some(points) = &report.sweep {
            write_text(&args.out.join("sweep.csv"), &sweep_csv(points))?;
        }
    }
    Ok(())
}
