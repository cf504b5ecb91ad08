//! Command-line syntax.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::parse::{parse_grid, parse_real, ParseError};

/// Evaluation points given as a comma list or `a:b:n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

fn grid(s: &str) -> Result<Grid, ParseError> {
    parse_grid(s).map(Grid)
}

#[derive(Debug, Parser)]
#[command(
    name = "stable-exit",
    version,
    about = "Exit time of a strictly stable Lévy process from the half-line: \
             ladder exponent, Laplace transform, density, sampling and verification"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ladder exponent κ(1, θ).
    Kappa {
        #[command(flatten)]
        law: LawArgs,
        /// θ grid: comma list or a:b:n (geometric).
        #[arg(long, value_parser = grid)]
        theta: Grid,
        /// Resolution of vanishing divisors at rational α.
        #[arg(long, value_enum, default_value_t = Policy::Perturb)]
        policy: Policy,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Laplace transform E^y exp(-tτ) of the exit time.
    Laplace {
        #[command(flatten)]
        law: LawArgs,
        #[arg(long, value_parser = grid)]
        t: Grid,
        /// Starting point y > 0.
        #[arg(long, default_value = "1", value_parser = parse_real)]
        start: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Density of the exit time; the representation used goes to stderr.
    Density {
        #[command(flatten)]
        law: LawArgs,
        #[arg(long, value_parser = grid)]
        s: Grid,
        #[arg(long, default_value = "1", value_parser = parse_real)]
        start: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Density of the mixing variable M_{α,ρ}.
    Mdensity {
        #[command(flatten)]
        law: LawArgs,
        #[arg(long, value_parser = grid)]
        x: Grid,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run a verification suite and print a JSON report.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Law for the convolution suite; all default laws when omitted.
        #[command(flatten)]
        law: OptLawArgs,
        /// Draws per Monte Carlo check.
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        /// Random-walk step for path simulations.
        #[arg(long, default_value = "1e-3", value_parser = parse_real)]
        step: f64,
        /// Required by the suites that sample.
        #[arg(long)]
        seed: Option<u64>,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a sample and write it as CSV with a JSON sidecar.
    Sample {
        #[arg(value_enum)]
        target: Target,
        #[command(flatten)]
        law: OptLawArgs,
        /// Index of N(γ) for the positive_stable target.
        #[arg(long, value_parser = parse_real)]
        gamma: Option<f64>,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        /// Time step: for stable, the increment length (default 1); for tau,
        /// simulate random-walk skeletons instead of inverting the density.
        #[arg(long, value_parser = parse_real)]
        step: Option<f64>,
        /// Censoring horizon for path simulation (default 50·y^α, or 1000 for α ≤ 1).
        #[arg(long, value_parser = parse_real)]
        horizon: Option<f64>,
        #[arg(long, default_value = "1", value_parser = parse_real)]
        start: f64,
        /// CSV destination; the sidecar gets the extension .json.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Args)]
pub struct LawArgs {
    /// Stability index α ∈ (0, 2]; fractions such as 2/3 are accepted.
    #[arg(long, value_parser = parse_real)]
    pub alpha: f64,
    /// Positivity parameter ρ = P(X_1 ≥ 0).
    #[arg(long, value_parser = parse_real, conflicts_with = "beta", required_unless_present = "beta")]
    pub rho: Option<f64>,
    /// Skewness β ∈ [-1, 1].
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub beta: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct OptLawArgs {
    #[arg(long, value_parser = parse_real)]
    pub alpha: Option<f64>,
    #[arg(long, value_parser = parse_real, conflicts_with = "beta")]
    pub rho: Option<f64>,
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub beta: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct OutArgs {
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Policy {
    Perturb,
    Paired,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Stieltjes,
    Doney,
    ClosedForm,
    Scaling,
    Normalization,
    Sym23,
    Subordinator,
    Rational,
    Trig,
    Convolution,
    Montecarlo,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Stable,
    #[value(name = "positive_stable", alias = "positive-stable")]
    PositiveStable,
    #[value(name = "M", alias = "m")]
    M,
    Tau,
}
