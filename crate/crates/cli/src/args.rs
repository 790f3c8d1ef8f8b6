use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "cpcover",
    version,
    about = "Clopper-Pearson intervals, their exact coverage, and Monte Carlo checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Confidence interval for k successes in n trials
    Ci(CiArgs),
    /// Exact coverage probability at one or more proportions
    Coverage(CoverageArgs),
    /// Rare-event bound 1 - (delta/2)^(1/n) over a log-spaced range of n
    Bound(BoundArgs),
    /// Replicate the estimate and compare the hit rate to the exact coverage
    Simulate(SimulateArgs),
    /// Estimate the instability probability of an uncertain polynomial
    DemoRobust(DemoArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// L <= p <= U
    Closed,
    /// L < p < U
    Open,
}

#[derive(Debug, Args)]
pub struct CiArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub k: u64,
    #[arg(long)]
    pub delta: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CoverageArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub delta: f64,
    /// Proportion to evaluate; repeat for several
    #[arg(long = "p", conflicts_with = "grid")]
    pub p: Vec<f64>,
    /// Evaluate at i/(M+1) for i = 1..=M (default M = 999)
    #[arg(long, value_name = "M")]
    pub grid: Option<usize>,
    #[arg(long, value_enum, default_value_t = Mode::Closed)]
    pub mode: Mode,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    /// Confidence parameters, comma separated or repeated
    #[arg(long, value_delimiter = ',', default_values_t = [0.001, 0.01, 0.05])]
    pub delta: Vec<f64>,
    #[arg(long, default_value_t = 100)]
    pub n_min: u64,
    #[arg(long, default_value_t = 100_000)]
    pub n_max: u64,
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub delta: f64,
    #[arg(long, alias = "replications")]
    pub reps: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    /// Coefficient bounds, `key = value` per line
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, default_value_t = 10_000)]
    pub n: u64,
    #[arg(long, default_value_t = 0.01)]
    pub delta: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}
