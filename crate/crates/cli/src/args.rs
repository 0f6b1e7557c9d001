use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "entsig", version, about = "Statistical significance of Bell inequality and witness tests")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Violation, error and significance of Mermin and Ardehali along a noise grid
    Sweep(SweepArgs),
    /// Noise level and fidelity where Mermin and Ardehali swap significance order
    Crossing(CrossingArgs),
    /// Evaluate a count file against an inequality
    Report(ReportArgs),
    /// Write predicted or Poisson-sampled counts for a noisy state
    Counts(CountsArgs),
    /// Improve the GHZ projector witness for a detected pure state
    Improve(ImproveArgs),
    /// Compare sampled spread of the violation with the propagated error
    Montecarlo(MonteCarloArgs),
    /// Print an inequality in measured form as JSON
    Inequality(InequalityArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NoiseArg {
    Bitflip,
    White,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StateArg {
    Ghz,
    Ansatz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InequalityArg {
    Mermin,
    Ardehali,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct ExperimentArgs {
    #[arg(long, value_enum, default_value_t = NoiseArg::Bitflip)]
    pub noise: NoiseArg,
    #[arg(long, default_value_t = 4)]
    pub qubits: usize,
    /// Total copies per inequality, split equally over its settings [default: 8000]
    #[arg(long)]
    pub shots: Option<f64>,
    /// Copies in every setting, instead of an equal split of --shots
    #[arg(long, conflicts_with = "shots")]
    pub per_setting: Option<f64>,
    #[arg(long, value_enum, default_value_t = StateArg::Ghz)]
    pub state: StateArg,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file; standard output when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub experiment: ExperimentArgs,
    /// Noise grid as start:end:points [default: 0:0.5:200 for bitflip, 0:1:200 for white]
    #[arg(long)]
    pub grid: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CrossingArgs {
    #[command(flatten)]
    pub experiment: ExperimentArgs,
    /// Scan grid before bisection
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    /// Bisection tolerance on the noise parameter
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    /// Count file: {"inequality": ..., "settings": [{"label": ..., "counts": [...]}]}
    pub counts: PathBuf,
    /// Inequality family; taken from the count file's name when absent
    #[arg(long, value_enum, conflicts_with = "inequality_file")]
    pub inequality: Option<InequalityArg>,
    #[arg(long)]
    pub qubits: Option<usize>,
    /// Inequality in measured form, as printed by the `inequality` command
    #[arg(long)]
    pub inequality_file: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CountsArgs {
    #[command(flatten)]
    pub experiment: ExperimentArgs,
    #[arg(long, value_enum)]
    pub inequality: InequalityArg,
    /// Noise parameter
    #[arg(long, default_value_t = 0.0)]
    pub p: f64,
    /// Draw Poisson counts instead of writing expected values
    #[arg(long)]
    pub sample: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ImproveArgs {
    /// Real amplitudes as bits:value pairs, normalized afterwards
    #[arg(long, default_value = "0000:0.8,1111:0.6")]
    pub amplitudes: String,
    /// Weight on the state itself [default: -<W>/2]
    #[arg(long)]
    pub a: Option<f64>,
    /// Weight on the orthogonal direction [default: Delta^2 / a]
    #[arg(long)]
    pub b: Option<f64>,
    /// Also take a first-order step of this size
    #[arg(long)]
    pub perturbative: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct MonteCarloArgs {
    #[command(flatten)]
    pub experiment: ExperimentArgs,
    /// Noise parameter
    #[arg(long, default_value_t = 0.05)]
    pub p: f64,
    #[arg(long, default_value_t = 2000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Restrict to one inequality
    #[arg(long, value_enum)]
    pub inequality: Option<InequalityArg>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct InequalityArgs {
    #[arg(long, value_enum)]
    pub name: InequalityArg,
    #[arg(long, default_value_t = 4)]
    pub qubits: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
