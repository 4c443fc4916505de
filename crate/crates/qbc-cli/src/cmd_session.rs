//! `qbc session`: run one protocol session under a chosen strategy and
//! put the transcript through Bob's acceptance test.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;

use qbc::adversary::AttackModel;
use qbc::link::{apply_dark_correction, LinkParams};
use qbc::protocol::{run_session, run_session_with_claim, ProtocolConfig, Strategy};
use qbc::seeds::rng_for;
use qbc::verifier::{accept_test, tally, Decision, Thresholds, Verdict};

use crate::config::FileConfig;
use crate::output::Sink;
use crate::{CliError, NoiseFlags};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AttackKind {
    Breidbart,
    AddedNoise,
    Memory,
    BoundedMemory,
    Nondemolition,
}

impl std::str::FromStr for AttackKind {
    type Err = String;

    // Config-file spelling matches the flag values.
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "breidbart" => Ok(Self::Breidbart),
            "added-noise" => Ok(Self::AddedNoise),
            "memory" => Ok(Self::Memory),
            "bounded-memory" => Ok(Self::BoundedMemory),
            "nondemolition" => Ok(Self::Nondemolition),
            other => Err(format!("unknown attack {other:?}")),
        }
    }
}

#[derive(Args, Debug)]
pub struct SessionArgs {
    /// Run a dishonest strategy instead of the honest default (also
    /// settable via the config file key `attack`).
    #[arg(long, value_enum)]
    attack: Option<AttackKind>,
    /// Honest commitment value; ignored when an attack runs.
    #[arg(long, conflicts_with = "attack")]
    commit: Option<u8>,
    /// Skip the simulation: load a stored transcript and re-run the
    /// acceptance test against the configured expectations.
    #[arg(long)]
    replay: Option<PathBuf>,
    /// Extra white noise for added-noise attacks.
    #[arg(long)]
    delta_pd: Option<f64>,
    /// Memory decoherence accumulated before a postponed measurement.
    #[arg(long)]
    pd_dt: Option<f64>,
    /// Stored fraction for bounded-memory attacks.
    #[arg(long)]
    nu: Option<f64>,
    /// Non-demolition efficiency.
    #[arg(long)]
    pnd: Option<f64>,
    /// Commitment value an attacker claims at the opening (default: coin
    /// toss).
    #[arg(long)]
    claim: Option<u8>,

    /// Pulses Bob schedules.
    #[arg(long)]
    pulses: Option<u64>,
    /// State angle theta (default pi/4).
    #[arg(long)]
    theta: Option<f64>,
    /// Relative phase phi.
    #[arg(long)]
    phi: Option<f64>,
    #[command(flatten)]
    noise: NoiseFlags,

    /// Pulse repetition rate.
    #[arg(long)]
    f_rep: Option<f64>,
    /// Mean photons per pulse.
    #[arg(long)]
    mu_photon: Option<f64>,
    /// Absorption exponent per km.
    #[arg(long)]
    alpha_abs: Option<f64>,
    /// Fiber length in km.
    #[arg(long)]
    length_km: Option<f64>,
    /// Detector efficiency.
    #[arg(long)]
    eta_det: Option<f64>,
    /// Dark-count probability per gate per detector.
    #[arg(long)]
    p_dark: Option<f64>,

    /// Viability threshold in sigmas.
    #[arg(long)]
    alpha_sigmas: Option<f64>,
    /// Security threshold in sigmas.
    #[arg(long)]
    beta_sigmas: Option<f64>,
    /// Minimum acceptable fraction of the expected detections.
    #[arg(long)]
    min_yield: Option<f64>,

    /// Master seed (required).
    #[arg(long)]
    seed: Option<u64>,
    /// Write the full transcript JSON here.
    #[arg(long)]
    transcript: Option<PathBuf>,
}

/// Flattened verdict record; one row per session.
#[derive(Serialize)]
struct VerdictRow {
    strategy: String,
    claimed: u8,
    decision: String,
    detections: u64,
    secure: bool,
    inconclusive: bool,
    low_yield: bool,
    n_b0: u64,
    n_b1: u64,
    q1_b0: Option<f64>,
    q1_b1: Option<f64>,
    z_honest_b0: Option<f64>,
    z_honest_b1: Option<f64>,
    z_cheat_b0: Option<f64>,
    z_cheat_b1: Option<f64>,
}

fn verdict_row(strategy: &Strategy, verdict: &Verdict, detections: u64) -> VerdictRow {
    VerdictRow {
        strategy: match strategy {
            Strategy::Honest { c } => format!("honest{c}"),
            Strategy::Attack(model) => format!("{model:?}"),
        },
        claimed: verdict.claimed,
        decision: match verdict.decision {
            Decision::Accept(c) => format!("accept-{c}"),
            Decision::Reject => "reject".to_string(),
        },
        detections,
        secure: verdict.secure,
        inconclusive: verdict.inconclusive,
        low_yield: verdict.low_yield,
        n_b0: verdict.rows[0].n,
        n_b1: verdict.rows[1].n,
        q1_b0: verdict.rows[0].observed,
        q1_b1: verdict.rows[1].observed,
        z_honest_b0: verdict.rows[0].z_honest,
        z_honest_b1: verdict.rows[1].z_honest,
        z_cheat_b0: verdict.rows[0].z_cheat,
        z_cheat_b1: verdict.rows[1].z_cheat,
    }
}

pub fn run(args: SessionArgs, file: &FileConfig, sink: &Sink) -> Result<(), CliError> {
    let default = ProtocolConfig::default();
    let cfg = ProtocolConfig {
        theta: file.resolve(args.theta, "theta", default.theta)?,
        phi: file.resolve(args.phi, "phi", default.phi)?,
        n_pulses: file.resolve(args.pulses, "pulses", default.n_pulses)?,
        noise: args.noise.resolve(file)?,
        link: LinkParams {
            f_rep: file.resolve(args.f_rep, "f-rep", default.link.f_rep)?,
            mu_photon: file.resolve(args.mu_photon, "mu-photon", default.link.mu_photon)?,
            alpha_abs: file.resolve(args.alpha_abs, "alpha-abs", default.link.alpha_abs)?,
            length_km: file.resolve(args.length_km, "length-km", default.link.length_km)?,
            eta_det: file.resolve(args.eta_det, "eta-det", default.link.eta_det)?,
            p_dark: file.resolve(args.p_dark, "p-dark", default.link.p_dark)?,
        },
        t0: default.t0,
        t1: default.t1.max(1),
        t2: default.t2.max(2),
    };
    // Arrival ticks start after the last emission tick.
    let cfg = ProtocolConfig {
        t1: cfg.t0 + cfg.n_pulses,
        t2: cfg.t0 + 2 * cfg.n_pulses.max(1),
        ..cfg
    };
    cfg.validate()?;
    if cfg.link.mu_warning() {
        eprintln!(
            "warning: mu_photon = {} strains the single-photon approximation",
            cfg.link.mu_photon
        );
    }

    let thresholds = Thresholds {
        alpha_sigmas: file.resolve(args.alpha_sigmas, "alpha-sigmas", 2.0)?,
        beta_sigmas: file.resolve(args.beta_sigmas, "beta-sigmas", 2.0)?,
        min_yield_fraction: file.resolve(args.min_yield, "min-yield", 0.0)?,
    };
    thresholds.validate()?;

    // Bob's expected tables at his configured noise, with the dark-count
    // correction folded into the honest hypothesis.
    let delta_p = cfg.link.dark_count_correction()?;
    let honest = apply_dark_correction(&cfg.honest_probs()?, delta_p)?;
    let cheat = cfg.cheat_probs()?;

    if let Some(path) = &args.replay {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
        let transcript = qbc::protocol::SessionTranscript::from_json(&text)?;
        let claim = file
            .resolve_opt(args.claim, "claim")?
            .unwrap_or(transcript.claimed_commitment);
        if claim > 1 {
            return Err(CliError::usage("--claim must be 0 or 1"));
        }
        let expected = transcript.bob_bits.len() as f64 * cfg.link.per_pulse_yield();
        let verdict = accept_test(
            &tally(&transcript, &transcript.bob_bits),
            claim,
            &honest,
            &cheat,
            &thresholds,
            Some(expected),
        );
        let row = verdict_row(&transcript.strategy, &verdict, transcript.detected() as u64);
        sink.write(&[row])?;
        eprintln!(
            "replay: {} detections, claimed {}, {}",
            transcript.detected(),
            verdict.claimed,
            match verdict.decision {
                Decision::Accept(c) => format!("accept-{c}"),
                Decision::Reject => "reject".to_string(),
            }
        );
        return Ok(());
    }

    let seed = file
        .resolve_opt(args.seed, "seed")?
        .ok_or_else(|| CliError::usage("--seed is required for stochastic commands"))?;

    let attack = file.resolve_opt(args.attack, "attack")?;
    let strategy = match attack {
        None => {
            let c = file.resolve(args.commit, "commit", 0u8)?;
            if c > 1 {
                return Err(CliError::usage("--commit must be 0 or 1"));
            }
            Strategy::Honest { c }
        }
        Some(AttackKind::Breidbart) => Strategy::Attack(AttackModel::Breidbart),
        Some(AttackKind::AddedNoise) => Strategy::Attack(AttackModel::AddedNoise {
            delta_p_d: file
                .resolve_opt(args.delta_pd, "delta-pd")?
                .ok_or_else(|| CliError::usage("--delta-pd is required for added-noise"))?,
        }),
        Some(AttackKind::Memory) => Strategy::Attack(AttackModel::Memory {
            p_d_delta_t: file
                .resolve_opt(args.pd_dt, "pd-dt")?
                .ok_or_else(|| CliError::usage("--pd-dt is required for memory"))?,
        }),
        Some(AttackKind::BoundedMemory) => Strategy::Attack(AttackModel::BoundedMemory {
            nu: file
                .resolve_opt(args.nu, "nu")?
                .ok_or_else(|| CliError::usage("--nu is required for bounded-memory"))?,
            inner: Box::new(AttackModel::Memory {
                p_d_delta_t: file.resolve(args.pd_dt, "pd-dt", 0.0)?,
            }),
        }),
        Some(AttackKind::Nondemolition) => Strategy::Attack(AttackModel::NonDemolition {
            p_nd: file
                .resolve_opt(args.pnd, "pnd")?
                .ok_or_else(|| CliError::usage("--pnd is required for nondemolition"))?,
            fallback: Box::new(AttackModel::Breidbart),
        }),
    };

    let mut rng = rng_for(seed, "session");
    let claim = file.resolve_opt(args.claim, "claim")?;
    let transcript = match (&strategy, claim) {
        (_, Some(c)) if c > 1 => return Err(CliError::usage("--claim must be 0 or 1")),
        (Strategy::Honest { c }, Some(claim)) if *c != claim => {
            return Err(CliError::usage(
                "an honest party opens its own commitment; drop --claim",
            ))
        }
        (_, Some(c)) => run_session_with_claim(&cfg, &strategy, c, &mut rng)?,
        (_, None) => run_session(&cfg, &strategy, &mut rng)?,
    };

    let verdict = accept_test(
        &tally(&transcript, &transcript.bob_bits),
        transcript.claimed_commitment,
        &honest,
        &cheat,
        &thresholds,
        Some(cfg.expected_detections()),
    );

    if let Some(path) = &args.transcript {
        std::fs::write(path, transcript.to_json())
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))?;
    }
    let row = verdict_row(&strategy, &verdict, transcript.detected() as u64);
    sink.write(&[row])?;
    eprintln!(
        "session: {} detections, claimed {}, {}",
        transcript.detected(),
        verdict.claimed,
        match verdict.decision {
            Decision::Accept(c) => format!("accept-{c}"),
            Decision::Reject => "reject".to_string(),
        }
    );
    Ok(())
}
