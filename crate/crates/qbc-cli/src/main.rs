//! `qbc` drives the two-state quantum bit commitment toolkit from the
//! command line: conditional-probability tables, metric sweeps, security
//! thresholds, protocol sessions and the zero-knowledge coloring demo.
//!
//! Exit codes: 0 success, 1 usage problems (flags, files, grids), 2
//! validation or infeasible parameters.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

mod cmd_probs;
mod cmd_session;
mod cmd_sweep;
mod cmd_thresholds;
mod cmd_zk;
mod config;
mod output;

use config::FileConfig;
use output::{Format, Sink};

/// A CLI failure with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub message: String,
    pub usage: bool,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
            usage: true,
        }
    }

    pub fn validation(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
            usage: false,
        }
    }
}

impl From<qbc::Error> for CliError {
    fn from(err: qbc::Error) -> Self {
        match err {
            qbc::Error::Parse { .. } | qbc::Error::EmptyGrid => Self::usage(err.to_string()),
            _ => Self::validation(err.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "qbc", version, about = "Two-state quantum bit commitment toolkit")]
struct Cli {
    /// Flat key = value config file; flags take precedence over it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output file (defaults to stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the conditional-probability table p_c(r|b).
    Probs(cmd_probs::ProbsArgs),
    /// Emit metric surfaces and curves over parameter grids.
    Sweep(cmd_sweep::SweepArgs),
    /// Reproduce the noise-threshold tables.
    Thresholds(cmd_thresholds::ThresholdsArgs),
    /// Run one protocol session and Bob's acceptance test.
    Session(cmd_session::SessionArgs),
    /// Run the zero-knowledge graph-coloring demo.
    Zk(cmd_zk::ZkArgs),
}

/// Noise coefficients shared by several commands.
#[derive(Args, Debug, Default, Clone)]
pub struct NoiseFlags {
    /// Transmission white noise p_d.
    #[arg(long)]
    pd: Option<f64>,
    /// Preparation-stage white noise.
    #[arg(long)]
    pd_prep: Option<f64>,
    /// Measurement-stage white noise.
    #[arg(long)]
    pd_meas: Option<f64>,
    /// Preparation-stage bit-flip probability.
    #[arg(long)]
    pb_prep: Option<f64>,
    /// Measurement-stage bit-flip probability.
    #[arg(long)]
    pb_meas: Option<f64>,
    /// Preparation-stage phase-flip probability.
    #[arg(long)]
    pp_prep: Option<f64>,
    /// Measurement-stage phase-flip probability.
    #[arg(long)]
    pp_meas: Option<f64>,
    /// Transmission unitary rotation angle.
    #[arg(long)]
    u_alpha: Option<f64>,
    /// Transmission unitary diagonal phase.
    #[arg(long)]
    u_lambda: Option<f64>,
    /// Transmission unitary off-diagonal phase.
    #[arg(long)]
    u_mu: Option<f64>,
}

impl NoiseFlags {
    pub fn resolve(&self, file: &FileConfig) -> Result<qbc::channels::NoiseParams, CliError> {
        Ok(qbc::channels::NoiseParams {
            p_d_trans: file.resolve(self.pd, "pd", 0.0)?,
            p_d_prep: file.resolve(self.pd_prep, "pd-prep", 0.0)?,
            p_d_meas: file.resolve(self.pd_meas, "pd-meas", 0.0)?,
            p_b_prep: file.resolve(self.pb_prep, "pb-prep", 0.0)?,
            p_b_meas: file.resolve(self.pb_meas, "pb-meas", 0.0)?,
            p_p_prep: file.resolve(self.pp_prep, "pp-prep", 0.0)?,
            p_p_meas: file.resolve(self.pp_meas, "pp-meas", 0.0)?,
            u_alpha: file.resolve(self.u_alpha, "u-alpha", 0.0)?,
            u_lambda: file.resolve(self.u_lambda, "u-lambda", 0.0)?,
            u_mu: file.resolve(self.u_mu, "u-mu", 0.0)?,
        })
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let sink = Sink {
        format: cli.format,
        out: cli.out.clone(),
    };
    match cli.command {
        Command::Probs(args) => cmd_probs::run(args, &file, &sink),
        Command::Sweep(args) => cmd_sweep::run(args, &file, &sink),
        Command::Thresholds(args) => cmd_thresholds::run(args, &file, &sink),
        Command::Session(args) => cmd_session::run(args, &file, &sink),
        Command::Zk(args) => cmd_zk::run(args, &file, &sink),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(if e.usage { 1 } else { 2 })
        }
    }
}
