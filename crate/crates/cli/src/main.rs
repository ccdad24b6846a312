//! `spectraflow` — run the atom-field spectral experiments from a JSON
//! config and write deterministic CSV (and optional SVG) outputs.
//!
//! Exit codes: 0 success, 2 config error, 3 numerical failure,
//! 4 truncation-convergence cap exceeded.

mod commands;
mod config;
mod format;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::RunConfig;
use spectraflow::Error;

/// Worker-count override; affects runtime only, never output bytes.
const WORKERS_ENV: &str = "SPECTRAFLOW_WORKERS";

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numeric(Error),
    Io(std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Numeric(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(Error::TruncationCap { .. }) => 4,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Config(msg) => format!("config error: {msg}"),
            CliError::Numeric(e) => format!("numerical failure: {e}"),
            CliError::Io(e) => format!("io error: {e}"),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "spectraflow",
    about = "Spectral diagnostics for the Rabi, Jaynes-Cummings, and broken-parity Rabi models",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Path to the JSON run configuration.
    #[arg(long)]
    config: PathBuf,

    /// Also write a minimal SVG rendering next to the CSV.
    #[arg(long)]
    svg: bool,

    /// Override the configured output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalue flow over the coupling grid -> spectrum.csv
    Spectrum(RunArgs),
    /// Refined level-crossing candidates -> crossings.csv
    Crossings(RunArgs),
    /// Per-eigenstate uncertainty products -> uncertainty.csv
    Uncertainty(RunArgs),
    /// Uncertainty distribution at fixed coupling -> histogram.csv
    Histogram(RunArgs),
    /// Truncation convergence report -> JSON on stdout
    Converge(RunArgs),
}

impl Command {
    fn split(&self) -> (&'static str, &RunArgs) {
        match self {
            Command::Spectrum(a) => ("spectrum", a),
            Command::Crossings(a) => ("crossings", a),
            Command::Uncertainty(a) => ("uncertainty", a),
            Command::Histogram(a) => ("histogram", a),
            Command::Converge(a) => ("converge", a),
        }
    }
}

fn load_config(path: &PathBuf) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    RunConfig::parse(&text)
}

fn worker_pool() -> Result<Option<rayon::ThreadPool>, CliError> {
    match std::env::var(WORKERS_ENV) {
        Err(_) => Ok(None),
        Ok(raw) => {
            let n: usize = raw.parse().map_err(|_| {
                CliError::Config(format!("{WORKERS_ENV} must be a positive integer, got {raw:?}"))
            })?;
            if n == 0 {
                return Err(CliError::Config(format!(
                    "{WORKERS_ENV} must be a positive integer, got 0"
                )));
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Config(format!("cannot build worker pool: {e}")))?;
            Ok(Some(pool))
        }
    }
}

fn try_main() -> Result<(), CliError> {
    let cli = Cli::parse();
    let (name, args) = cli.command.split();
    let cfg = load_config(&args.config)?;
    let run = || commands::run(name, &cfg, args.out.clone(), args.svg);
    match worker_pool()? {
        Some(pool) => pool.install(run),
        None => run(),
    }
}

fn main() -> ExitCode {
    match try_main() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("spectraflow: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
