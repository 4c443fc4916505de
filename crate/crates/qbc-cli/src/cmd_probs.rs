//! `qbc probs`: the eight-entry conditional table, optionally
//! cross-checked against the Kraus-pipeline oracle.

use clap::Args;
use serde::Serialize;

use qbc::channels::{closed_form_cond_probs, numeric_cond_probs};

use crate::config::FileConfig;
use crate::output::Sink;
use crate::{CliError, NoiseFlags};

#[derive(Args, Debug)]
pub struct ProbsArgs {
    /// State angle theta (default pi/4).
    #[arg(long)]
    theta: Option<f64>,
    /// Relative phase phi.
    #[arg(long)]
    phi: Option<f64>,
    #[command(flatten)]
    noise: NoiseFlags,
    /// Also evaluate the Kraus-pipeline oracle and report the deltas.
    #[arg(long)]
    check_oracle: bool,
}

#[derive(Serialize)]
struct ProbRow {
    c: u8,
    r: u8,
    b: u8,
    probability: f64,
    oracle_delta: Option<f64>,
}

pub fn run(args: ProbsArgs, file: &FileConfig, sink: &Sink) -> Result<(), CliError> {
    let theta = file.resolve(args.theta, "theta", std::f64::consts::FRAC_PI_4)?;
    let phi = file.resolve(args.phi, "phi", 0.0)?;
    let noise = args.noise.resolve(file)?;

    let closed = closed_form_cond_probs(&noise, theta, phi)?;
    let oracle = if args.check_oracle {
        Some(numeric_cond_probs(&noise, theta, phi)?)
    } else {
        None
    };

    let mut rows = Vec::with_capacity(8);
    let mut max_delta = 0.0f64;
    for c in 0..2u8 {
        for r in 0..2u8 {
            for b in 0..2u8 {
                let probability = closed.prob(c, r, b);
                let oracle_delta = oracle.as_ref().map(|o| {
                    let d = probability - o.prob(c, r, b);
                    max_delta = max_delta.max(d.abs());
                    d
                });
                rows.push(ProbRow {
                    c,
                    r,
                    b,
                    probability,
                    oracle_delta,
                });
            }
        }
    }
    sink.write(&rows)?;
    if args.check_oracle {
        eprintln!("max |closed - oracle| = {max_delta:.3e}");
    }
    Ok(())
}
