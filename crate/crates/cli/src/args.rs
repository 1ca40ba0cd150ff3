use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "cvtele", version, about = "Gaussian channel simulation by CV teleportation")]
pub struct Cli {
    /// JSON-lines file each run is appended to.
    #[arg(long, global = true, default_value = "runs.jsonl")]
    pub ledger: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fidelity and region grid over the (tau, y) plane, plus curves and
    /// special points.
    Diagram(DiagramArgs),
    /// Optimal channel and fidelity at fixed entanglement.
    Optimize(OptimizeArgs),
    /// Induced channel of a teleportation resource.
    Simulate(SimulateArgs),
    /// Run the oracle and property suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ResourceKind {
    Tmss,
    Optimal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Oracles,
    Inequalities,
    Regions,
}

#[derive(Debug, Args)]
pub struct DiagramArgs {
    #[arg(long, default_value_t = 0.5)]
    pub r: f64,
    #[arg(long, default_value_t = 0.5)]
    pub lambda: f64,
    #[arg(long, default_value_t = 0.0)]
    pub tau_min: f64,
    #[arg(long, default_value_t = 3.0)]
    pub tau_max: f64,
    #[arg(long, default_value_t = 0.0)]
    pub y_min: f64,
    #[arg(long, default_value_t = 3.0)]
    pub y_max: f64,
    /// Lattice points per axis.
    #[arg(long, default_value_t = 300)]
    pub resolution: usize,
    /// CSV grid path; the companion JSON goes next to it.
    #[arg(long, default_value = "diagram.csv")]
    pub out: PathBuf,
    /// Tolerance used when tagging regions.
    #[arg(long, default_value_t = cvtele_core::DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long)]
    pub r: f64,
    #[arg(long)]
    pub lambda: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub resource: ResourceKind,
    /// Squeezing (`tmss`) or entanglement parameter with `E_N = 2r` (`optimal`).
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub tau: Option<f64>,
    /// Target noise; with `--tau` and no `--r` the TMSS squeezing is solved for.
    #[arg(long)]
    pub y: Option<f64>,
    /// Teleportation gain; defaults to `√tau` (or 1 for a bare TMSS).
    #[arg(long)]
    pub g: Option<f64>,
    /// Seed of the random probe states used for the oracle residual.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 64)]
    pub probes: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
