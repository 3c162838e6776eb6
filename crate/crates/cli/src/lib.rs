//! Command-line front end: bound curves, code construction, verification,
//! tail estimates and subset-average identities.
//!
//! Exit status is 0 on success, 1 when a verification fails and 2 on bad
//! input.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] multipack::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

pub(crate) type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "multipack", version, about = "Multiple packings: bounds, constructions and checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate every bound of a family on a grid and write CSV.
    Bounds(BoundsArgs),
    /// Sample a random code and expurgate it into a multiple packing.
    Construct(ConstructArgs),
    /// Check that a code file is a multiple packing.
    Verify(VerifyArgs),
    /// Probability that a random list has small average radius.
    Tail(TailArgs),
    /// Subset-average identity (and the cap bound) for a spherical code.
    Identity(IdentityArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Bounded,
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Notion {
    Cheb,
    Avg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Ensemble {
    Gaussian,
    Sphere,
    Ball,
    TruncGaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum UnitsArg {
    Nats,
    Bits,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long = "L")]
    pub list_size: usize,
    #[arg(long, value_enum, default_value = "bounded")]
    pub family: Family,
    /// `lo:hi:step`; x is N/P for bounded and N for unbounded packings.
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long, value_enum, default_value = "nats")]
    pub units: UnitsArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EnsembleArgs {
    #[arg(long, value_enum, default_value = "gaussian")]
    pub ensemble: Ensemble,
    /// Shell thickness of the truncated Gaussian.
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    #[arg(long)]
    pub n: usize,
    #[arg(long = "L")]
    pub list_size: usize,
    #[arg(long = "P")]
    pub power: f64,
    #[arg(long = "N")]
    pub noise: f64,
    #[arg(long, value_enum, default_value = "avg")]
    pub notion: Notion,
    /// Rate in nats, either a number or `<factor>*<bound name>`, e.g.
    /// `0.8*lb_gaussian` (evaluated at the given L and N/P).
    #[arg(long)]
    pub rate: String,
    /// Sample at variance P/(1+eps) to reduce power violations.
    #[arg(long, default_value_t = 0.0)]
    pub eps: f64,
    #[arg(long = "m-cap", default_value_t = multipack::expurgation::DEFAULT_M_CAP)]
    pub m_cap: usize,
    /// Restrict the bad-list search to sweep-line neighbourhoods.
    #[arg(long)]
    pub prefilter: bool,
    /// Where to write the code; without it the code goes to standard output
    /// and the report to standard error.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub code: PathBuf,
    #[arg(long = "L")]
    pub list_size: usize,
    #[arg(long = "N")]
    pub noise: f64,
    /// Power limit; defaults to the one in the file header.
    #[arg(long = "P")]
    pub power: Option<f64>,
    #[arg(long, value_enum, default_value = "avg")]
    pub notion: Notion,
}

#[derive(Debug, Args)]
pub struct TailArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    #[arg(long)]
    pub n: usize,
    #[arg(long = "L")]
    pub list_size: usize,
    #[arg(long = "P", default_value_t = 1.0)]
    pub power: f64,
    #[arg(long = "N")]
    pub noise: f64,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    /// Exact chi-square evaluation (Gaussian ensemble only).
    #[arg(long)]
    pub exact: bool,
}

#[derive(Debug, Args)]
pub struct IdentityArgs {
    /// Code file; when absent a code is sampled.
    pub code: Option<PathBuf>,
    #[arg(long = "L")]
    pub list_size: usize,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long = "M")]
    pub size: Option<usize>,
    #[arg(long = "P")]
    pub power: Option<f64>,
    /// Sample from (and check the bound for) the cap of this angular radius
    /// around e_1.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(stderr, "{e}") } else { write!(stdout, "{e}") };
            return code;
        }
    };
    match commands::dispatch(&cli.command, stdout, stderr) {
        Ok(status) => status,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_INPUT
        }
    }
}
