use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use neurodyn::experiments::DEFAULT_SEED;
use neurodyn::models::ModelKind;

#[derive(Debug, Parser)]
#[command(
    name = "neurodyn",
    version,
    about = "Simulate analogue neural solvers for Ax = b"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate until the residual settles and write a JSON summary.
    Solve(RunArgs),
    /// Integrate for a fixed horizon and write the trajectory as CSV.
    Simulate(RunArgs),
    /// Run a scripted scenario, writing one CSV per run and a JSON report.
    Experiment(ExperimentArgs),
    /// Print the spectral rate quantities of a problem as JSON.
    Rates(RatesArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Gnn,
    Znn,
    Iznn,
    Ignn,
}

impl From<ModelArg> for ModelKind {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Gnn => ModelKind::Gnn,
            ModelArg::Znn => ModelKind::Znn,
            ModelArg::Iznn => ModelKind::Iznn,
            ModelArg::Ignn => ModelKind::Ignn,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NamedProblem {
    /// Singular 3×3 example with an inconsistent right-hand side.
    SingularNosol,
    /// Singular 3×3 example with infinitely many solutions.
    SingularMulti,
    /// Seeded matrix with the singular values given by `--sigma`.
    Prescribed,
}

/// Where the linear system comes from. With nothing given, a seeded
/// 3×3 matrix with `λ_min(AᵀA) = 0.2345` is generated.
#[derive(Debug, Clone, Args)]
pub struct ProblemArgs {
    /// JSON file with fields `n`, `A` (flat row-major or nested rows) and `b`.
    #[arg(long, value_name = "PATH", conflicts_with_all = ["matrix", "named"])]
    pub problem: Option<PathBuf>,
    /// Inline matrix, rows separated by `;`, entries by `,`.
    #[arg(long, value_name = "ROWS", requires = "rhs", conflicts_with = "named")]
    pub matrix: Option<String>,
    /// Inline right-hand side, comma separated.
    #[arg(long, value_name = "VALUES", requires = "matrix")]
    pub rhs: Option<String>,
    #[arg(long, value_enum)]
    pub named: Option<NamedProblem>,
    /// Ascending singular values for the prescribed generator.
    #[arg(long, value_name = "VALUES", value_delimiter = ',')]
    pub sigma: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub source: ProblemArgs,
    #[arg(long, value_enum, default_value = "ignn")]
    pub model: ModelArg,
    #[arg(long, default_value_t = 1000.0, value_parser = positive)]
    pub gamma: f64,
    /// Step size in milliseconds; defaults to a tenth of the stable step.
    #[arg(long, value_name = "MS", value_parser = positive)]
    pub h: Option<f64>,
    /// Horizon in milliseconds. `solve` doubles it until the residual settles.
    #[arg(long, value_name = "MS", default_value_t = 60.0, value_parser = positive)]
    pub t_end_ms: f64,
    /// Keep every k-th step; defaults to at most 5000 samples.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub stride: Option<u64>,
    #[arg(long, env = "NEURODYN_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Initial state, comma separated; defaults to a seeded draw in [-2, 2]ⁿ.
    #[arg(
        long,
        value_name = "VALUES",
        value_delimiter = ',',
        allow_hyphen_values = true
    )]
    pub x0: Option<Vec<f64>>,
    /// Output file; `solve` prints to stdout without it.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scenario {
    Fig1,
    #[value(name = "fig2-nosol")]
    Fig2Nosol,
    #[value(name = "fig2-multi")]
    Fig2Multi,
    Compare,
}

impl Scenario {
    pub fn file_stem(self) -> &'static str {
        match self {
            Self::Fig1 => "fig1",
            Self::Fig2Nosol => "fig2_nosol",
            Self::Fig2Multi => "fig2_multi",
            Self::Compare => "compare",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ExperimentArgs {
    #[arg(value_enum)]
    pub name: Scenario,
    #[arg(long, default_value_t = 1000.0, value_parser = positive)]
    pub gamma: f64,
    /// Number of initial states.
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..))]
    pub inits: u64,
    #[arg(long, env = "NEURODYN_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, value_name = "MS", value_parser = positive)]
    pub t_end_ms: Option<f64>,
    #[arg(long, value_name = "MS", value_parser = positive)]
    pub h: Option<f64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub stride: Option<u64>,
    /// `compare` only: use the singular example with b = [1, 1, 1].
    #[arg(long)]
    pub singular: bool,
    /// Output directory.
    #[arg(long, value_name = "DIR", default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct RatesArgs {
    #[command(flatten)]
    pub source: ProblemArgs,
    #[arg(long, default_value_t = 1000.0, value_parser = positive)]
    pub gamma: f64,
    #[arg(long, env = "NEURODYN_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

fn positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("expected a positive number, got {s}"))
    }
}
