//! `qbc sweep`: metric surfaces over noise grids and the added-noise
//! entropy curve. Grid cells fan out over a worker pool; output order is
//! fixed by grid index regardless of scheduling.

use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use qbc::adversary::cheating_cond_probs;
use qbc::channels::{closed_form_cond_probs, ConditionalProbs, NoiseParams};
use qbc::metrics::{
    avg_entropy_noise, avg_fidelity_noise, avg_fidelity_observables, avg_fidelity_states,
};

use crate::config::FileConfig;
use crate::output::Sink;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepKind {
    /// |<F(states)> - <F(observables)>| over (theta, p_d).
    ThetaPd,
    /// Same balance gap over (theta, p_b) on the extended flip domain.
    ThetaPb,
    /// Fidelities over (p_d, b) at theta = pi/4, b the joint flip
    /// coefficient.
    PdB,
    /// Relative entropy and fidelity against the honest statistics as a
    /// function of the attacker's added white noise.
    EntropyDpd,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Which surface to emit.
    #[arg(long, value_enum)]
    kind: SweepKind,
    /// Grid points per axis.
    #[arg(long)]
    steps: Option<u32>,
    /// Channel white noise (entropy-dpd only).
    #[arg(long)]
    pd: Option<f64>,
}

#[derive(Serialize)]
struct BalanceRow {
    theta: f64,
    noise: f64,
    balance_gap: f64,
}

#[derive(Serialize)]
struct PdBRow {
    p_d: f64,
    b: f64,
    fidelity_vs_ideal: f64,
    fidelity_states: f64,
    fidelity_observables: f64,
}

#[derive(Serialize)]
struct EntropyRow {
    delta_pd: f64,
    entropy_vs_honest: f64,
    fidelity_vs_honest: f64,
    fidelity_vs_ideal: f64,
}

pub fn run(args: SweepArgs, file: &FileConfig, sink: &Sink) -> Result<(), CliError> {
    let steps = file.resolve(args.steps, "steps", 51u32)?;
    if steps < 2 {
        return Err(CliError::usage("need at least 2 grid steps per axis"));
    }
    match args.kind {
        SweepKind::ThetaPd => {
            let rows = balance_surface(steps, |p| Ok(NoiseParams::depolarizing_only(p)))?;
            sink.write(&rows)
        }
        SweepKind::ThetaPb => {
            let rows = balance_surface(steps, |p| {
                Ok(NoiseParams {
                    p_b_prep: p,
                    ..NoiseParams::zero()
                })
            })?;
            sink.write(&rows)
        }
        SweepKind::PdB => {
            let cells: Vec<(u32, u32)> = (0..steps)
                .flat_map(|i| (0..steps).map(move |j| (i, j)))
                .collect();
            let ideal = ConditionalProbs::ideal(std::f64::consts::FRAC_PI_4);
            let rows = cells
                .par_iter()
                .map(|&(i, j)| -> Result<PdBRow, qbc::Error> {
                    let p_d = f64::from(i) / f64::from(steps - 1);
                    let b = f64::from(j) / f64::from(steps - 1);
                    // p_b_prep = b/2 realizes the joint coefficient b with
                    // the measurement flip off.
                    let params = NoiseParams {
                        p_d_trans: p_d,
                        p_b_prep: b / 2.0,
                        ..NoiseParams::zero()
                    };
                    let cp = closed_form_cond_probs(
                        &params,
                        std::f64::consts::FRAC_PI_4,
                        0.0,
                    )?;
                    Ok(PdBRow {
                        p_d,
                        b,
                        fidelity_vs_ideal: avg_fidelity_noise(&ideal, &cp),
                        fidelity_states: avg_fidelity_states(&cp),
                        fidelity_observables: avg_fidelity_observables(&cp),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            sink.write(&rows)
        }
        SweepKind::EntropyDpd => {
            let p_d = file.resolve(args.pd, "pd", 0.0)?;
            let base = NoiseParams::depolarizing_only(p_d);
            let honest = closed_form_cond_probs(&base, std::f64::consts::FRAC_PI_4, 0.0)?;
            let ideal = ConditionalProbs::ideal(std::f64::consts::FRAC_PI_4);
            let max_delta = 1.0 - p_d;
            let rows = (0..steps)
                .into_par_iter()
                .map(|i| -> Result<EntropyRow, qbc::Error> {
                    let delta_pd = max_delta * f64::from(i) / f64::from(steps - 1);
                    let cheat = cheating_cond_probs(
                        &base.with_added_depolarizing(delta_pd.min(max_delta))?,
                        std::f64::consts::FRAC_PI_4,
                        0.0,
                    )?;
                    let entropy = avg_entropy_noise(&honest, &cheat)
                        .finite()
                        .unwrap_or(f64::INFINITY);
                    Ok(EntropyRow {
                        delta_pd,
                        entropy_vs_honest: entropy,
                        fidelity_vs_honest: avg_fidelity_noise(&honest, &cheat),
                        fidelity_vs_ideal: avg_fidelity_noise(&ideal, &cheat),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            sink.write(&rows)
        }
    }
}

fn balance_surface(
    steps: u32,
    params_at: impl Fn(f64) -> Result<NoiseParams, qbc::Error> + Sync,
) -> Result<Vec<BalanceRow>, CliError> {
    let cells: Vec<(u32, u32)> = (0..steps)
        .flat_map(|i| (0..steps).map(move |j| (i, j)))
        .collect();
    let rows = cells
        .par_iter()
        .map(|&(i, j)| -> Result<BalanceRow, qbc::Error> {
            // Interior theta grid; the endpoints are degenerate.
            let theta =
                f64::from(i + 1) / f64::from(steps + 1) * std::f64::consts::FRAC_PI_2;
            let noise = f64::from(j) / f64::from(steps - 1);
            let cp = closed_form_cond_probs(&params_at(noise)?, theta, 0.0)?;
            Ok(BalanceRow {
                theta,
                noise,
                balance_gap: (avg_fidelity_states(&cp) - avg_fidelity_observables(&cp)).abs(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(rows)
}
