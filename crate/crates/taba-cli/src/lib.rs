//! Command-line front end for the taba pipeline.
//!
//! One subcommand per stage (relatedness, fit-beta, allocate, simulate)
//! plus `run`, which chains them over a single scenario file. All outputs
//! are deterministic: fixed key order and 9-significant-digit floats.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub mod commands;
pub mod formats;
pub mod jsonio;

pub use commands::CmdError;

pub const DEFAULT_DP_CELL_LIMIT: u64 = taba_core::allocator::DEFAULT_DP_CELL_LIMIT;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolverArg {
    /// Exact DP when the instance fits the cell limit, greedy otherwise.
    Auto,
    /// Force exact dynamic programming.
    Dp,
    /// Force greedy marginal selection.
    Greedy,
}

#[derive(Debug, Parser)]
#[command(name = "taba", version, about = "Label-budget allocation for multi-task learning")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct SimulateArgs {
    /// Scenario JSON with `world` and `profile` sections.
    pub scenario: PathBuf,
    /// Override the world's noise seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Cell-update ceiling for the exact solver.
    #[arg(long, default_value_t = DEFAULT_DP_CELL_LIMIT)]
    pub dp_cell_limit: u64,
    /// Also sweep two-task budget splits.
    #[arg(long)]
    pub sweep: bool,
    /// Number of sweep points.
    #[arg(long, default_value_t = 21)]
    pub sweep_steps: usize,
    /// Write the strategy report JSON here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the sweep CSV here (stdout when omitted).
    #[arg(long)]
    pub sweep_out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct RunArgs {
    /// Scenario JSON; probe_log/curves are used when present, the bundled
    /// profile otherwise.
    pub scenario: PathBuf,
    /// Directory for the stage outputs.
    #[arg(long)]
    pub out: PathBuf,
    /// Override the world's noise seed.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = SolverArg::Auto)]
    pub solver: SolverArg,
    #[arg(long, default_value_t = DEFAULT_DP_CELL_LIMIT)]
    pub dp_cell_limit: u64,
    #[arg(long)]
    pub sweep: bool,
    #[arg(long, default_value_t = 21)]
    pub sweep_steps: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate the transfer matrix from a probe log.
    Relatedness {
        /// Probe-log JSON: an array of probe records.
        log: PathBuf,
        /// Number of tasks covered by the log.
        #[arg(long)]
        tasks: usize,
        /// Write the transfer matrix JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit a reduction rate to a learning curve.
    FitBeta {
        /// Learning-curve JSON.
        curve: PathBuf,
        /// Write {beta, ds, residual} here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the budget allocation for a scenario.
    Allocate {
        /// Scenario JSON with `task_set` (or `world`) and `profile`.
        scenario: PathBuf,
        #[arg(long, value_enum, default_value_t = SolverArg::Auto)]
        solver: SolverArg,
        #[arg(long, default_value_t = DEFAULT_DP_CELL_LIMIT)]
        dp_cell_limit: u64,
        /// Write the allocation JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare strategies inside the synthetic world.
    Simulate(SimulateArgs),
    /// Chain all stages over one scenario.
    Run(RunArgs),
}

/// Executes a parsed command line, returning the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let result = match &cli.command {
        Command::Relatedness { log, tasks, out } => {
            commands::cmd_relatedness(log, *tasks, out.as_deref())
        }
        Command::FitBeta { curve, out } => commands::cmd_fit_beta(curve, out.as_deref()),
        Command::Allocate {
            scenario,
            solver,
            dp_cell_limit,
            out,
        } => commands::cmd_allocate(scenario, *solver, *dp_cell_limit, out.as_deref()),
        Command::Simulate(args) => commands::cmd_simulate(args),
        Command::Run(args) => commands::cmd_run(args),
    };
    match result {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {}", err.message);
            err.code
        }
    }
}
