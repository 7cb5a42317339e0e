//! `mgauss`: evaluate, sample and verify Multi-Gaussian distributions and
//! write the data behind the figures.

mod commands;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use error::CliError;
use output::Format;

#[derive(Parser, Debug)]
#[command(name = "mgauss", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a function of the distribution on a grid.
    Eval(EvalArgs),
    /// Draw seeded variates.
    Sample(SampleArgs),
    /// Write the data series of figure 1 to 8, one file per series.
    Figure(FigureArgs),
    /// Run the library-versus-oracle verification suite.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Pdf,
    Cdf,
    Quantile,
    Moments,
    Cumulants,
    Mgf,
    Cf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Univariate Multi-Gaussian.
    Mg,
    /// Log-Multi-Gaussian.
    Lmg,
    /// Bivariate Multi-Gaussian.
    Mv,
}

/// Distribution parameters. `--mu`, `--sigma` apply to `mg` and `lmg`;
/// `--mu1 --mu2 --sigma1 --sigma2 --rho` to `mv`.
#[derive(Args, Debug, Clone)]
pub struct Params {
    #[arg(long, default_value_t = 0.0)]
    pub mu: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Shape parameter M > 0.
    #[arg(long, default_value_t = 1.0)]
    pub m: f64,
    #[arg(long, default_value_t = 0.0)]
    pub mu1: f64,
    #[arg(long, default_value_t = 0.0)]
    pub mu2: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma1: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma2: f64,
    #[arg(long, default_value_t = 0.0)]
    pub rho: f64,
    /// Term cap for the fractional-M series.
    #[arg(long)]
    pub max_terms: Option<usize>,
}

/// Abscissas: an explicit list with `--x`, or `--points` evenly spaced
/// values over `[--from, --to]`. Defaults depend on the kind.
#[derive(Args, Debug, Clone)]
pub struct Grid {
    #[arg(long)]
    pub from: Option<f64>,
    #[arg(long)]
    pub to: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    /// Comma-separated abscissas; overrides the grid.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x: Option<Vec<f64>>,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct EvalArgs {
    #[arg(value_enum)]
    pub kind: Kind,
    #[arg(long, value_enum, default_value_t = Family::Mg)]
    pub family: Family,
    #[command(flatten)]
    pub params: Params,
    #[command(flatten)]
    pub grid: Grid,
    /// Single moment or cumulant order; orders 1 to 4 when omitted.
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct SampleArgs {
    #[arg(long, value_enum, default_value_t = Family::Mg)]
    pub family: Family,
    #[command(flatten)]
    pub params: Params,
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FigureArgs {
    /// Figure number, 1 to 8.
    pub id: u32,
    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// One of all, univariate, lmg, mv, series.
    #[arg(default_value = "all")]
    pub suite: String,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => return fail(CliError::Invalid(e.to_string())),
    };
    let result = match cli.command {
        Command::Eval(a) => commands::eval(&a),
        Command::Sample(a) => commands::sample(&a),
        Command::Figure(a) => commands::figure(&a),
        Command::Verify(a) => commands::verify(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e),
    }
}

fn fail(e: CliError) -> ExitCode {
    eprintln!("{}", e.to_json());
    ExitCode::from(e.exit_code() as u8)
}
