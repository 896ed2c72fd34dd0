//! The `capforge` experiment driver.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 verification failure,
//! 3 budget exhausted where an exact answer was demanded.

mod commands;
mod config;
mod verify;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use config::{Common, ConstructionConfig, ConstructionInputs, FileConfig, RunConfig};
pub use verify::{verify_constructed, Check};

use crate::analysis::SeriesMode;
use crate::graph::MaterializationCap;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("verification failed: {}", .0.join("; "))]
    Verification(Vec<String>),
    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error(transparent)]
    Lib(#[from] crate::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Lib(_) => 1,
            CliError::Verification(_) => 2,
            CliError::BudgetExhausted(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "capforge",
    version,
    about = "Jump graphs, strong powers and independence series"
)]
pub struct Cli {
    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct CommonArgs {
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Largest power materialized as an explicit graph.
    #[arg(long)]
    pub cap: Option<usize>,
    #[arg(long)]
    pub budget_nodes: Option<u64>,
    #[arg(long)]
    pub budget_secs: Option<f64>,
    #[arg(long)]
    pub threads: Option<usize>,
    /// JSON file with construction and run parameters.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args, Clone, Default)]
pub struct ConstructionArgs {
    /// Row/column construction with one removed edge per row pair.
    #[arg(long, conflicts_with = "multi")]
    pub simple: bool,
    /// Strong product of canonical jump graphs.
    #[arg(long)]
    pub multi: bool,
    #[arg(long)]
    pub nu: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub nus: Option<Vec<usize>>,
    /// Rows of the first product factor.
    #[arg(long)]
    pub n1: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Exact,
    Auto,
    CertificateOnly,
}

impl From<ModeArg> for SeriesMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => SeriesMode::Exact,
            ModeArg::Auto => SeriesMode::Auto,
            ModeArg::CertificateOnly => SeriesMode::CertificateOnly,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a graph and write it with its metadata sidecar.
    Construct {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        construction: ConstructionArgs,
    },
    /// Lower and upper bounds on alpha(G^k) for k = 1..k_max.
    Series {
        graph: PathBuf,
        #[arg(long)]
        k_max: Option<usize>,
        #[arg(long, value_enum, default_value = "auto")]
        mode: ModeArg,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Sample a canonical graph and compare a_1 against the a_nu certificate.
    JumpDemo {
        #[arg(long)]
        nu: Option<usize>,
        /// Vertex count; must be a multiple of nu.
        #[arg(long = "vertices", visible_alias = "N")]
        vertices: Option<usize>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Build a product with several jumps and report its series.
    MultiJump {
        #[arg(long, value_delimiter = ',')]
        nus: Option<Vec<usize>>,
        #[arg(long)]
        n1: Option<usize>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        k_max: Option<usize>,
        #[arg(long, value_enum, default_value = "auto")]
        mode: ModeArg,
        /// Also write the product graph here.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Distribution of alpha over independently sampled canonical graphs.
    McAlpha {
        #[arg(long)]
        nu: Option<usize>,
        #[arg(long = "vertices", visible_alias = "N")]
        vertices: Option<usize>,
        #[arg(long)]
        trials: Option<usize>,
        /// Comparison level for `trials * bound(s)`.
        #[arg(long, default_value_t = 1e-3)]
        threshold: f64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Re-check a graph file against its metadata.
    Verify {
        graph: PathBuf,
        /// Highest power whose certificate is re-verified.
        #[arg(long)]
        k_max: Option<usize>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

impl CommonArgs {
    pub fn resolve(&self) -> Result<Common, CliError> {
        let file = match &self.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let env_cap = std::env::var(MaterializationCap::ENV_VAR).ok();
        let env_cap = match env_cap {
            Some(s) => Some(s.trim().parse::<usize>().map_err(|_| {
                CliError::Usage(format!(
                    "{} must be an integer, got {s:?}",
                    MaterializationCap::ENV_VAR
                ))
            })?),
            None => None,
        };
        let cap = self
            .cap
            .or(env_cap)
            .or(file.cap)
            .unwrap_or(MaterializationCap::DEFAULT.0);
        if self.threads == Some(0) || file.threads == Some(0) {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        Ok(Common {
            seed: self.seed.or(file.seed).unwrap_or(0),
            out: self.out.clone(),
            cap: MaterializationCap(cap),
            budget_nodes: self.budget_nodes.or(file.budget_nodes),
            budget_secs: self.budget_secs.or(file.budget_secs),
            threads: self.threads.or(file.threads),
            file,
        })
    }
}

/// Parses `args` and runs the chosen subcommand.
pub fn run_with<I, T>(args: I) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return Ok(());
        }
        Err(e) => return Err(CliError::Usage(e.to_string())),
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .try_init();
    commands::dispatch(cli.command)
}

/// Entry point for the binary.
pub fn run() -> ExitCode {
    match run_with(std::env::args_os()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("capforge: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
