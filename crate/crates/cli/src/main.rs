//! `sokg`: grid evaluation, figure data, verification and Bargmann tables
//! for superoscillating Klein-Gordon evolutions.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug)]
pub enum CliError {
    /// Exit code 2.
    Config(String),
    /// Exit code 1.
    CheckFailed(String),
    /// Exit code 1.
    Runtime(anyhow::Error),
}

impl From<superosc_kg::Error> for CliError {
    fn from(e: superosc_kg::Error) -> Self {
        use superosc_kg::Error as E;
        match e {
            E::InvalidParameter { .. } | E::InvalidProblem(_) | E::CoefficientOverflow { .. } => {
                CliError::Config(e.to_string())
            }
            other => CliError::Runtime(other.into()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.into())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Runtime(e.into())
    }
}

#[derive(Parser, Debug)]
#[command(name = "sokg", version, about = "Superoscillating initial data under the Klein-Gordon equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate u_n(x,t) on a grid (CSV: x,t,re,im)
    Evolve(EvolveArgs),
    /// Run the acceptance checks and write a report
    Verify(VerifyArgs),
    /// Tables of xi_n, its inverse transform and the integral representations
    Bargmann(BargmannArgs),
    /// Covariance kernel K_{m,x}(s,t) (CSV: s,t,K)
    Kernel(KernelArgs),
    /// Coefficients C_j(n,a) (CSV: j,lambda,value,log_magnitude,sign)
    Coeffs(CoeffsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Report,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Case {
    /// u(x,0) = F_n(x,a), u_t(x,0) = F_n'(x,a)
    P1,
    /// u(x,0) = F_n(x,a), u_t(x,0) = F_n(x,b)
    P2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SourceArg {
    Zero,
    DiracSpace,
    DiracSpacetime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Figure1,
    Figure2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Table {
    Xi,
    Roundtrip,
    Derivative,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Common {
    /// TOML file, or a CSV written by this tool (its `# key=value` preamble)
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub common: Common,
    /// Number of terms minus one, or `inf` for the limit solution
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Velocity parameter, --case p2 only
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    #[arg(long)]
    pub m: Option<f64>,
    #[arg(long, value_enum)]
    pub case: Option<Case>,
    #[arg(long, value_enum)]
    pub source: Option<SourceArg>,
    /// x grid as min:max:count
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    /// t grid as min:max:count (or a single time)
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<String>,
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Values of a for --preset figure1 (default 1.5,2,4)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub a_list: Option<Vec<f64>>,
    /// Panels per unit length for the source-term quadrature
    #[arg(long)]
    pub panels_per_unit: Option<usize>,
    /// Gauss-Legendre order per panel for the source-term quadrature
    #[arg(long)]
    pub order: Option<usize>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Run only these checks (names or criterion numbers, comma separated)
    #[arg(long, value_delimiter = ',')]
    pub only: Option<Vec<String>>,
    /// Multiply every tolerance by this factor
    #[arg(long)]
    pub tol_scale: Option<f64>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct BargmannArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long)]
    pub m: Option<f64>,
    /// Times for the xi and roundtrip tables
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<String>,
    /// Positions for the roundtrip and derivative tables
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    /// Re z grid for the xi table
    #[arg(long, allow_hyphen_values = true)]
    pub zre: Option<String>,
    /// Im z grid for the xi table
    #[arg(long, allow_hyphen_values = true)]
    pub zim: Option<String>,
    #[arg(long, value_enum)]
    pub table: Option<Table>,
    /// Gauss-Hermite nodes per axis (coarse rule; the fine rule has 4/3 as many)
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Permit n > 12
    #[arg(long)]
    pub allow_large_n: bool,
}

#[derive(Args, Debug, Clone, Default)]
pub struct KernelArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub m: Option<f64>,
    /// Spatial position x of the kernel r_{m,x}
    #[arg(long, allow_hyphen_values = true)]
    pub xpos: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<String>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct CoeffsArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Evolve(args) => commands::evolve(args),
        Command::Verify(args) => commands::verify(args),
        Command::Bargmann(args) => commands::bargmann(args),
        Command::Kernel(args) => commands::kernel(args),
        Command::Coeffs(args) => commands::coeffs(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(msg)) => {
            eprintln!("sokg: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::CheckFailed(msg)) => {
            eprintln!("sokg: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Runtime(e)) => {
            eprintln!("sokg: {e:#}");
            ExitCode::from(1)
        }
    }
}
