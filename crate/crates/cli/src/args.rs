use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "nct",
    version,
    about = "Noncentral t-distribution: CDF, PDF, quantiles and parameter solvers"
)]
pub struct Cli {
    #[command(flatten)]
    pub tuning: Tuning,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Tuning {
    /// Number of Gauss-Kronrod panels across the integration window
    #[arg(long, global = true, env = "NCT_N_SUBS", value_parser = clap::value_parser!(u32).range(1..=4096))]
    pub n_subs: Option<u32>,
    /// Relative tolerance used to cut the integration window
    #[arg(long, global = true, value_parser = unit_interval)]
    pub eps_r: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Both tail probabilities at x
    Cdf(PointArgs),
    /// Density at x
    Pdf(PointArgs),
    /// x with a given tail probability
    Quantile(QuantileArgs),
    /// Solve for delta or nu given x and Pr(T <= x)
    #[command(subcommand)]
    Solve(SolveCommand),
    /// Reproduce the built-in reference table
    Table(TableArgs),
    /// Dump the integrand at every quadrature node as CSV
    Integrand(IntegrandArgs),
    /// Time CDF evaluation over a parameter sweep (CSV)
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = finite, required_unless_present = "batch")]
    pub x: Option<f64>,
    #[arg(long, allow_hyphen_values = true, value_parser = finite, required_unless_present = "batch")]
    pub nu: Option<f64>,
    #[arg(long, allow_hyphen_values = true, value_parser = finite, required_unless_present = "batch")]
    pub delta: Option<f64>,
    /// Read `x,nu,delta` rows from a CSV file (`-` for standard input)
    #[arg(long, conflicts_with_all = ["x", "nu", "delta"])]
    pub batch: Option<PathBuf>,
    /// One JSON object per line
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Tail {
    Lower,
    Upper,
}

#[derive(Debug, Args)]
pub struct QuantileArgs {
    /// Tail probability
    #[arg(long, value_parser = finite)]
    pub p: f64,
    #[arg(long, allow_hyphen_values = true, value_parser = finite)]
    pub nu: f64,
    #[arg(long, allow_hyphen_values = true, value_parser = finite)]
    pub delta: f64,
    /// Which tail `p` refers to
    #[arg(long, value_enum, default_value_t = Tail::Lower)]
    pub tail: Tail,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum SolveCommand {
    /// Noncentrality giving Pr(T <= x) = p
    Delta {
        #[arg(long, allow_hyphen_values = true, value_parser = finite)]
        x: f64,
        #[arg(long, allow_hyphen_values = true, value_parser = finite)]
        nu: f64,
        #[arg(long, value_parser = finite)]
        p: f64,
        #[arg(long)]
        json: bool,
    },
    /// Degrees of freedom giving Pr(T <= x) = p
    Nu {
        #[arg(long, allow_hyphen_values = true, value_parser = finite)]
        x: f64,
        #[arg(long, allow_hyphen_values = true, value_parser = finite)]
        delta: f64,
        #[arg(long, value_parser = finite)]
        p: f64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Relative error allowed per row
    #[arg(long, default_value_t = 1e-12, value_parser = finite)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct IntegrandArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = finite)]
    pub x: f64,
    #[arg(long, allow_hyphen_values = true, value_parser = finite)]
    pub nu: f64,
    #[arg(long, allow_hyphen_values = true, value_parser = finite)]
    pub delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Windowed quadrature (the library's `cdf`)
    Direct,
    /// Poisson-weighted incomplete-beta series
    Series,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// x values as `lo:hi:count[:log]` or a single value
    #[arg(long, allow_hyphen_values = true, default_value = "1:50:5")]
    pub x: String,
    #[arg(long, default_value = "1:1000:4:log")]
    pub nu: String,
    #[arg(long, allow_hyphen_values = true, default_value = "0:40:5")]
    pub delta: String,
    /// Timed repetitions per cell (at least 32)
    #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u32).range(32..))]
    pub reps: u32,
    #[arg(long, value_enum, default_value_t = Method::Direct)]
    pub method: Method,
}

fn finite(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{s} is not a finite number"))
    }
}

fn unit_interval(s: &str) -> Result<f64, String> {
    let v = finite(s)?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(format!("{s} is not in (0, 1)"))
    }
}
