//! Command-line front end: `fiberband <command> --config run.toml`.

pub mod commands;
pub mod config;
pub mod output;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, ValueEnum};

pub use config::{Format, RunConfig};
pub use report::RunReport;

use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_INCONCLUSIVE: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(Error),
    #[error("output error: {0}")]
    Output(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            // input that can never be valid for the command
            Error::InvalidProfile(_) | Error::NotEmbedded { .. } | Error::InsufficientRange { .. } => {
                CliError::Config(e.to_string())
            }
            other => CliError::Numerical(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Numerical(_) => EXIT_NUMERICAL,
            CliError::Output(_) => EXIT_IO,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Slice,
    Bands,
    Flatband,
    Harmonic,
    Asymptotics,
    Scattering,
    Agmon,
}

#[derive(Debug, Parser)]
#[command(
    name = "fiberband",
    version,
    about = "Band functions and flat-band checks for fibered magnetic Laplacians"
)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// TOML run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Output directory; overrides `output.path`. Without either, the JSON report goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Comma-separated subset of csv, json, plotdata; overrides `output.formats`.
    #[arg(long, value_delimiter = ',')]
    pub format: Option<Vec<Format>>,
    /// Exit with code 4 when any verdict is inconclusive.
    #[arg(long)]
    pub strict: bool,
}

pub fn run_command(command: Command, cfg: &RunConfig) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let mut report = match command {
        Command::Slice => commands::cmd_slice(cfg),
        Command::Bands => commands::cmd_bands(cfg),
        Command::Flatband => commands::cmd_flatband(cfg),
        Command::Harmonic => commands::cmd_harmonic(cfg),
        Command::Asymptotics => commands::cmd_asymptotics(cfg),
        Command::Scattering => commands::cmd_scattering(cfg),
        Command::Agmon => commands::cmd_agmon(cfg),
    }?;
    report.seal(start.elapsed().as_secs_f64())?;
    Ok(report)
}

fn init_logging() {
    let env = env_logger::Env::new().filter_or("FIBERBAND_LOG", "warn");
    let _ = env_logger::Builder::from_env(env)
        .format_timestamp(None)
        .try_init();
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    let mut cfg = RunConfig::load(&cli.config)?;
    if let Some(f) = &cli.format {
        if f.is_empty() {
            return Err(CliError::Config("--format: must not be empty".into()));
        }
        cfg.output.formats = f.clone();
    }
    if let Some(out) = &cli.out {
        cfg.output.path = Some(out.clone());
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        if j == 0 {
            return Err(CliError::Config("--jobs: must be >= 1".into()));
        }
        builder = builder.num_threads(j);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Config(format!("--jobs: {e}")))?;
    let report = pool.install(|| run_command(cli.command, &cfg))?;

    match &cfg.output.path {
        Some(dir) => {
            let files = output::write_outputs(&report, dir, &cfg.output.formats)?;
            for v in &report.verdicts {
                println!("{}: {}", v.subject, v.verdict);
            }
            log::info!("wrote {} files to {}", files.len(), dir.display());
        }
        None => println!("{}", report.to_json()?),
    }
    if cli.strict && report.has_inconclusive() {
        return Ok(EXIT_INCONCLUSIVE);
    }
    Ok(EXIT_OK)
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    init_logging();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("fiberband: {e}");
            e.exit_code()
        }
    }
}
