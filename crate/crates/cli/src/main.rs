use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lora_planner_cli::commands::{cmd_capacity_search, cmd_curves, cmd_plan, cmd_simulate, Report};
use lora_planner_cli::config::{Overrides, Resolved, ScenarioConfig, SEED_ENV};
use lora_planner_cli::CliError;
use lora_planner_core::Rounding;

/// Plan and validate single-cell ADR LoRaWAN deployments.
#[derive(Debug, Parser)]
#[command(name = "lora-planner", version)]
struct Cli {
    /// JSON scenario file; unset keys fall back to the preset.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Built-in parameter set.
    #[arg(long, global = true)]
    preset: Option<String>,
    /// Master seed for Monte Carlo runs (falls back to LORA_PLANNER_SEED).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte Carlo trials per probe point.
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ScenarioArgs {
    /// Coverage radius in metres (radius-first planning).
    #[arg(long)]
    radius: Option<f64>,
    /// Total outage target.
    #[arg(long = "t-c0")]
    t_c0: Option<f64>,
    /// Disconnection target (geometry-first planning).
    #[arg(long = "t-h0")]
    t_h0: Option<f64>,
    /// allocated | allocated-discrete | fixed-max | fixed:<dBm>
    #[arg(long)]
    policy: Option<String>,
    /// floor | nearest | ceil
    #[arg(long)]
    rounding: Option<Rounding>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Ring geometry, per-ring capacity and average power.
    Plan(ScenarioArgs),
    /// Power allocation and outage as functions of distance.
    Curves {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Number of grid points between 0 and the coverage radius.
        #[arg(long)]
        points: Option<usize>,
    },
    /// Monte Carlo outage estimates against the closed forms.
    Simulate(ScenarioArgs),
    /// Largest per-ring node counts meeting the target, by simulation.
    CapacitySearch(ScenarioArgs),
}

fn run(cli: Cli) -> Result<Report, CliError> {
    let file = match &cli.config {
        Some(path) => ScenarioConfig::load(path)?,
        None => ScenarioConfig::default(),
    };
    let (scenario, points) = match &cli.command {
        Command::Plan(s) | Command::Simulate(s) | Command::CapacitySearch(s) => (s, None),
        Command::Curves { scenario, points } => (scenario, *points),
    };
    let overrides = Overrides {
        preset: cli.preset.clone(),
        seed: cli.seed,
        trials: cli.trials,
        radius_m: scenario.radius,
        t_c0: scenario.t_c0,
        t_h0: scenario.t_h0,
        policy: scenario.policy.clone(),
        rounding: scenario.rounding,
        curve_points: points,
    };
    let env_seed = std::env::var(SEED_ENV).ok();
    let cfg = Resolved::build(&file, &overrides, env_seed.as_deref())?;
    match cli.command {
        Command::Plan(_) => cmd_plan(&cfg, &cli.out),
        Command::Curves { .. } => cmd_curves(&cfg, &cli.out),
        Command::Simulate(_) => cmd_simulate(&cfg, &cli.out),
        Command::CapacitySearch(_) => cmd_capacity_search(&cfg, &cli.out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(report) => {
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            for line in &report.lines {
                println!("{line}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code as u8)
        }
    }
}
