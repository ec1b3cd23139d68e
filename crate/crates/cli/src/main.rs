//! `moments`: compute, cache and cross-check exact second-moment polynomials.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use moments_core::{EdgeVector, MomentError};

#[derive(Parser, Debug)]
#[command(name = "moments", version, about = "Exact moments of hafnians of Gaussian matrices")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Directory holding one file per computed polynomial.
    #[arg(long = "cache", env = "MOMENTS_CACHE", default_value = "moments-cache", global = true)]
    pub cache_dir: PathBuf,

    /// Worker threads; 0 lets the pool decide.
    #[arg(long, default_value_t = 0, global = true)]
    pub threads: usize,

    /// Output format; each command has its own default.
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,

    /// Seed for Monte Carlo runs.
    #[arg(long, default_value_t = 42, global = true)]
    pub seed: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print g(n, a) and optionally evaluate it at k.
    Compute {
        #[arg(long)]
        n: u32,
        /// Edge vector as a12,a13,a23.
        #[arg(long, value_parser = parse_edge_vector)]
        a: EdgeVector,
        /// An integer gives an exact value, a real gives the natural log.
        #[arg(long)]
        k: Option<String>,
    },
    /// Coefficients of g(n, 0, 0, 0) with closed-form checks.
    Coeffs {
        #[arg(long)]
        n: u32,
    },
    /// Log-transition statistic along k = n^a.
    Sweep {
        /// `lo:hi:step` or a comma-separated list of exponents.
        #[arg(long = "a")]
        a_spec: String,
        #[arg(long)]
        n_max: u32,
    },
    /// Cross-check the recursion against independent computations.
    Verify {
        #[command(subcommand)]
        mode: VerifyMode,
    },
}

#[derive(Subcommand, Debug)]
enum VerifyMode {
    /// Exhaustive graph enumeration.
    Oracle {
        #[arg(long)]
        n: u32,
        /// Permit same-row enumeration at order 4 (minutes of work).
        #[arg(long)]
        allow_large: bool,
    },
    /// Monte Carlo sampling of |Haf(X^T X)|^(2t).
    Mc {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 2)]
        t: u32,
    },
    /// Coefficient identities, bounds and class sizes up to an order.
    ClosedForms {
        #[arg(long)]
        n_max: u32,
    },
}

fn parse_edge_vector(s: &str) -> Result<EdgeVector, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [x, y, z] = parts[..] else {
        return Err(format!("expected three comma-separated counts, got {s:?}"));
    };
    let num = |t: &str| t.parse::<u32>().map_err(|e| format!("{t:?}: {e}"));
    Ok(EdgeVector::new(num(x)?, num(y)?, num(z)?))
}

/// Failure classes, each with its own exit status.
#[derive(Debug)]
pub enum CliError {
    /// A cross-check disagreed.
    Verification(String),
    /// Bad arguments or inputs the engine rejects.
    Usage(String),
    /// The cache could not be read or written.
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
        }
    }
}

impl From<MomentError> for CliError {
    fn from(e: MomentError) -> Self {
        match e {
            MomentError::Io(_) | MomentError::CorruptCache { .. } | MomentError::UnreadableCacheFile { .. } => {
                CliError::Io(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.config.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.config.threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match cli.command {
        Command::Compute { n, a, k } => commands::compute(&cli.config, n, a, k.as_deref()),
        Command::Coeffs { n } => commands::coeffs(&cli.config, n),
        Command::Sweep { a_spec, n_max } => commands::sweep(&cli.config, &a_spec, n_max),
        Command::Verify { mode } => match mode {
            VerifyMode::Oracle { n, allow_large } => commands::verify_oracle(&cli.config, n, allow_large),
            VerifyMode::Mc { n, k, samples, t } => commands::verify_mc(&cli.config, t, n, k, samples),
            VerifyMode::ClosedForms { n_max } => commands::verify_closed_forms(&cli.config, n_max),
        },
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
