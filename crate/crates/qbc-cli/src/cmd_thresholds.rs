//! `qbc thresholds`: the maximum tolerable white noise and memory noise
//! for the standard sigma-threshold pairs.

use clap::Args;
use serde::Serialize;

use qbc::verifier::{memory_slack, solve_pd_delta_star, solve_pd_star, white_noise_slack};

use crate::config::FileConfig;
use crate::output::Sink;
use crate::CliError;

#[derive(Args, Debug)]
pub struct ThresholdsArgs {
    /// Counts per preparation bit.
    #[arg(long)]
    n: Option<u64>,
    /// State angle theta (default pi/4).
    #[arg(long)]
    theta: Option<f64>,
    /// Fixed channel noise for the memory table.
    #[arg(long)]
    pd: Option<f64>,
    /// Custom viability sigma multiple; replaces the standard rows
    /// together with --beta-sigmas.
    #[arg(long, requires = "beta_sigmas")]
    alpha_sigmas: Option<f64>,
    /// Custom security sigma multiple.
    #[arg(long, requires = "alpha_sigmas")]
    beta_sigmas: Option<f64>,
}

#[derive(Serialize)]
struct ThresholdRow {
    table: &'static str,
    alpha_sigmas: f64,
    beta_sigmas: f64,
    n_per_state: u64,
    p_star: Option<f64>,
    feasible: bool,
    /// Remaining separation between the honest alpha band and the cheat
    /// beta band at the reported threshold (negative when infeasible:
    /// the best the grid offers).
    slack: f64,
}

pub fn run(args: ThresholdsArgs, file: &FileConfig, sink: &Sink) -> Result<(), CliError> {
    let n = file.resolve(args.n, "n", 50u64)?;
    let theta = file.resolve(args.theta, "theta", std::f64::consts::FRAC_PI_4)?;
    let p_d = file.resolve(args.pd, "pd", 0.15)?;

    let pairs: Vec<(f64, f64)> = match (args.alpha_sigmas, args.beta_sigmas) {
        (Some(a), Some(b)) => vec![(a, b)],
        _ => vec![(2.0, 2.0), (3.0, 1.0), (3.0, 2.0), (2.0, 1.0)],
    };

    let mut rows = Vec::with_capacity(2 * pairs.len());
    for &(ka, kb) in &pairs {
        let p_star = solve_pd_star(ka, kb, n, theta)?;
        let slack = white_noise_slack(p_star.unwrap_or(0.0), ka, kb, n, theta)?;
        rows.push(ThresholdRow {
            table: "pd_star",
            alpha_sigmas: ka,
            beta_sigmas: kb,
            n_per_state: n,
            p_star,
            feasible: p_star.is_some(),
            slack,
        });
    }
    for &(ka, kb) in &pairs {
        let p_star = solve_pd_delta_star(p_d, ka, kb, n, theta)?;
        let slack = memory_slack(p_d, p_star.unwrap_or(1.0 - p_d), ka, kb, n, theta)?;
        rows.push(ThresholdRow {
            table: "pd_delta_star",
            alpha_sigmas: ka,
            beta_sigmas: kb,
            n_per_state: n,
            p_star,
            feasible: p_star.is_some(),
            slack,
        });
    }
    sink.write(&rows)
}
