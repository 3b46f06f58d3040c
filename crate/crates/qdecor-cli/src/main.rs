mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exit codes: 0 ok, 1 internal verification failure, 2 usage or validation, 3 I/O,
/// 4 valid input whose only reachable output is η̃ = 0.
#[derive(Debug)]
pub enum CliError {
    Verify(String),
    Usage(String),
    Io(String),
    Infeasible(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Verify(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Infeasible(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Verify(m) | CliError::Usage(m) | CliError::Io(m) | CliError::Infeasible(m) => m,
        }
    }
}

impl From<qdecor::Error> for CliError {
    fn from(e: qdecor::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Accepts a decimal or a ratio such as `-1/3`, so boundary values can be given exactly.
fn parse_real(s: &str) -> Result<f64, String> {
    let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("'{t}': {e}"));
    let v = match s.split_once('/') {
        Some((a, b)) => {
            let d = parse(b)?;
            if d == 0.0 {
                return Err("zero denominator".into());
            }
            parse(a)? / d
        }
        None => parse(s)?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

#[derive(Parser)]
#[command(name = "qdecor", version, about = "Covariant decorrelation of correlated qubit pairs and Gaussian modes")]
struct Cli {
    /// Seed for every Monte-Carlo estimate.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Bloch lengths at or below this count as zero.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Diff,
    Ident,
    IdentGeneral,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal output Bloch length over the (η, λ) grid, as CSV.
    Surface(SurfaceArgs),
    /// Solve one seed and optionally verify the channel on it, as JSON.
    Decorrelate(DecorrelateArgs),
    /// Gaussian decorrelating noise for a two-mode state, as JSON.
    Gaussian {
        #[command(subcommand)]
        state: GaussianState,
    },
    /// Phase-orbit witness that informative clones stay correlated, as JSON.
    Nocloning(NoCloningArgs),
    /// Noise ledger of the N → M continuous-variable cloning pipeline, as JSON.
    CvClone(CvCloneArgs),
}

#[derive(Args)]
pub struct SurfaceArgs {
    #[arg(long, value_enum)]
    pub mode: Mode,
    #[arg(long)]
    pub eta_steps: usize,
    #[arg(long)]
    pub lambda_steps: usize,
    /// Singlet fraction, ident-general only (default 0).
    #[arg(long, value_parser = parse_real)]
    pub p: Option<f64>,
    /// Output path, `-` for stdout.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct DecorrelateArgs {
    #[arg(long, value_enum)]
    pub mode: Mode,
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub eta: f64,
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub lambda: f64,
    #[arg(long, value_parser = parse_real)]
    pub p: Option<f64>,
    /// Build the Choi operator, apply it to the seed and report the checks.
    #[arg(long)]
    pub apply: bool,
    /// Also write the solved channel as a Choi file.
    #[arg(long)]
    pub choi_out: Option<PathBuf>,
}

#[derive(Subcommand)]
pub enum GaussianState {
    TwinBeam {
        #[arg(long, value_parser = parse_real)]
        lambda: f64,
        #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
        eps: f64,
    },
    Coherent {
        #[arg(long, value_parser = parse_real)]
        delta2: f64,
        #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
        eps: f64,
    },
    /// 4×4 correlation matrix, one row per line, whitespace or comma separated; `#` comments.
    Custom {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
        eps: f64,
    },
}

#[derive(Args)]
pub struct NoCloningArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long, value_parser = parse_real)]
    pub p: f64,
    /// Channel as Choi JSON; the universal 1 → 2 cloner when absent.
    #[arg(long)]
    pub choi: Option<PathBuf>,
}

#[derive(Args)]
pub struct CvCloneArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: usize,
    /// Input noise Δx²+Δy², one value for all inputs or a comma-separated list of N.
    #[arg(long, value_delimiter = ',', value_parser = parse_real, num_args = 1..)]
    pub noise: Vec<f64>,
    /// Thermal splitter ancillas, leaving uncorrelated clones.
    #[arg(long)]
    pub decorrelated: bool,
}

pub struct Globals {
    pub seed: u64,
    pub tol: f64,
}

fn run(cli: Cli) -> CliResult<()> {
    let g = Globals { seed: cli.seed, tol: cli.tol };
    if !(g.tol >= 0.0) {
        return Err(CliError::Usage(format!("--tol {} must be >= 0", g.tol)));
    }
    match cli.command {
        Command::Surface(a) => commands::surface(&a),
        Command::Decorrelate(a) => commands::decorrelate(&a, &g),
        Command::Gaussian { state } => commands::gaussian(&state),
        Command::Nocloning(a) => commands::nocloning(&a),
        Command::CvClone(a) => commands::cv_clone(&a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
