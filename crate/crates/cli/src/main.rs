use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod manifest;
mod options;

/// Differentiable rigid-body simulation with neural scalars and
/// trajectory-based system identification.
#[derive(Debug, Parser)]
#[command(name = "neurosim", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Roll out the hybrid model (analytical dynamics plus networks).
    Simulate(SimulateArgs),
    /// Roll out the analytical model with the target contact stepper.
    GenerateTarget(TargetArgs),
    /// Fit free model parameters and network weights to a target trajectory.
    Identify(IdentifyArgs),
    /// Compare model predictions against a target trajectory.
    Evaluate(EvaluateArgs),
    /// Convert a double-pendulum marker CSV into a joint-space trajectory.
    Import(ImportArgs),
}

#[derive(Debug, Args)]
struct RolloutArgs {
    /// Model description file.
    #[arg(long)]
    model: PathBuf,
    /// Initial state: comma-separated `q` then `qd` values, or a trajectory
    /// CSV whose first state is used.
    #[arg(long, allow_hyphen_values = true)]
    init_state: String,
    /// Simulated time in seconds; must be a whole number of steps.
    #[arg(long)]
    duration: f64,
    /// Time step in seconds.
    #[arg(long)]
    dt: f64,
    /// Output trajectory CSV. The run manifest goes next to it as
    /// `<out>.manifest.json`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    rollout: RolloutArgs,
    /// Neural blueprint file; without one the model is purely analytical.
    #[arg(long)]
    blueprint: Option<PathBuf>,
    /// Integration steps per output sample.
    #[arg(long, default_value_t = 1)]
    substeps: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ContactArg {
    Pgs,
    Compliant,
}

#[derive(Debug, Args)]
struct TargetArgs {
    #[command(flatten)]
    rollout: RolloutArgs,
    /// Contact stepper for bodies with a contact block.
    #[arg(long, value_enum, default_value_t = ContactArg::Pgs)]
    contact: ContactArg,
}

#[derive(Debug, Args)]
struct ObjectiveArgs {
    /// Target trajectory CSV.
    #[arg(long)]
    target: PathBuf,
    /// Neural blueprint file; omit for a purely analytical model.
    #[arg(long)]
    blueprint: Option<PathBuf>,
    /// Steps per shooting window [options file: objective.window, default 10].
    #[arg(long)]
    window: Option<usize>,
    /// Weight R of the network-weight penalty [objective.regularization, default 0].
    #[arg(long)]
    reg: Option<f64>,
    /// TOML file with `seed`, `[objective]`, `[pbh]`, `[pbh.lma]` and
    /// `[import]` sections; flags take precedence.
    #[arg(long)]
    options: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct IdentifyArgs {
    /// Model description file; `free(min, max)` marks fitted parameters.
    #[arg(long)]
    model: PathBuf,
    #[command(flatten)]
    objective: ObjectiveArgs,
    /// Parallel basin-hopping workers [pbh.workers, default 4].
    #[arg(long)]
    pbh_workers: Option<usize>,
    /// Total local solves [pbh.restarts, default 20].
    #[arg(long)]
    restarts: Option<usize>,
    /// Master seed for every random draw [seed]; without one a fresh seed is
    /// drawn and recorded in the manifest.
    #[arg(long)]
    seed: Option<u64>,
    /// Solve report (JSON). The run manifest goes next to it.
    #[arg(long)]
    out_report: PathBuf,
    /// Model file with the fitted values written back.
    #[arg(long)]
    out_model: PathBuf,
    /// Blueprint with the fitted weights [default: <out-model>.blueprint when
    /// a blueprint was given].
    #[arg(long)]
    out_blueprint: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    /// Model description file.
    #[arg(long)]
    model: PathBuf,
    #[command(flatten)]
    objective: ObjectiveArgs,
    /// Per-step prediction error CSV.
    #[arg(long)]
    out: PathBuf,
    /// Summary JSON with per-dimension RMSE and the windowed loss
    /// [default: <out>.summary.json].
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ImportArgs {
    /// Marker CSV with columns `t,x0,y0,x1,y1,x2,y2` (pivot, elbow, tip).
    #[arg(long)]
    markers: PathBuf,
    /// Metres per pixel [import.pixel_to_meter, default 1].
    #[arg(long)]
    pixel_to_meter: Option<f64>,
    /// Smooth velocity estimates with a width-5 moving average
    /// [import.smooth_velocities, default off].
    #[arg(long)]
    smooth_velocities: bool,
    /// Resample the imported trajectory to this time step.
    #[arg(long)]
    resample_dt: Option<f64>,
    /// Options file with an `[import]` section.
    #[arg(long)]
    options: Option<PathBuf>,
    /// Output trajectory CSV.
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => commands::simulate(a),
        Command::GenerateTarget(a) => commands::generate_target(a),
        Command::Identify(a) => commands::identify(a),
        Command::Evaluate(a) => commands::evaluate(a),
        Command::Import(a) => commands::import(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
