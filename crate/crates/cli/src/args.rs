//! Command-line flags.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "ringcurrent", version, about = "Ring-current decay and revival in the benzene cation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Propagate one run and write the angular-momentum time series.
    Simulate(SimulateArgs),
    /// Scan the coupling scale and write the per-gamma analysis.
    Sweep(SweepArgs),
    /// Run the oracle and invariant checks at reduced size.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpaceArg {
    /// Whole truncated basis.
    Full,
    /// Only the total-angular-momentum sector of the initial state (exact, much faster).
    Sector,
}

/// Model and propagation flags shared by `simulate` and `sweep`.
#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Maximum phonons per chiral oscillator.
    #[arg(long, default_value_t = 7)]
    pub cutoff: u32,
    /// Crank-Nicolson time step in atomic units.
    #[arg(long = "dt-au", default_value_t = 1.0)]
    pub dt_au: f64,
    /// Propagation length in fs.
    #[arg(long = "tmax-fs", default_value_t = 500.0)]
    pub tmax_fs: f64,
    /// Steps between recorded samples.
    #[arg(long, default_value_t = 20)]
    pub stride: usize,
    /// Mode table (`omega_cm1 d` per line); defaults to the three benzene modes.
    #[arg(long)]
    pub modes: Option<PathBuf>,
    /// Basis in which the state is propagated.
    #[arg(long, value_enum, default_value_t = SpaceArg::Full)]
    pub space: SpaceArg,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// Coupling scale applied to every mode (1 is physical).
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    #[command(flatten)]
    pub run: RunArgs,
    /// Output CSV; the manifest is written beside it.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long = "gamma-min", default_value_t = 0.25)]
    pub gamma_min: f64,
    #[arg(long = "gamma-max", default_value_t = 2.5)]
    pub gamma_max: f64,
    #[arg(long = "gamma-step", default_value_t = 0.25)]
    pub gamma_step: f64,
    /// Explicit comma-separated grid, overriding min/max/step.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub gammas: Option<Vec<f64>>,
    #[command(flatten)]
    pub run: RunArgs,
    /// Output CSV; the manifest is written beside it.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Maximum phonons per chiral oscillator.
    #[arg(long, default_value_t = 2)]
    pub cutoff: u32,
    /// Test hook: build nuclear angular momenta with the wrong chirality sign.
    #[arg(long = "corrupt-ln-sign", hide = true)]
    pub corrupt_ln_sign: bool,
}
