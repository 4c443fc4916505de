//! The three protocol phases as explicit machines for Bob (source side)
//! and Alice (honest or adversarial), wired into end-to-end sessions.
//!
//! Time is abstract integer ticks: a pulse emitted as the `k`-th of the
//! run leaves at `t0 + k` and, if detected, is announced at `t1 + k`. The
//! constant propagation delay carries no security content and is dropped.
//! Lost or undetected pulses simply never appear in the record.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::adversary::{
    bounded_memory_probs, cheating_cond_probs, memory_attack_probs, AttackModel,
};
use crate::channels::{closed_form_cond_probs, ConditionalProbs, NoiseParams};
use crate::link::{transmit, Detection, DetectionKind, LinkParams};
use crate::{check_range, Bit, Error, Result};

pub const TRANSCRIPT_VERSION: u32 = 1;

/// Everything needed to run one session.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    /// Angle between the two preparation states, in `(0, pi/2)`.
    pub theta: f64,
    /// Relative phase of the second basis.
    pub phi: f64,
    /// Number of pulses Bob schedules (`N`).
    pub n_pulses: u64,
    pub noise: NoiseParams,
    pub link: LinkParams,
    /// Initialization tick.
    pub t0: u64,
    /// Commitment tick; arrivals are announced from here on.
    pub t1: u64,
    /// Opening tick.
    pub t2: u64,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        Self {
            theta: std::f64::consts::FRAC_PI_4,
            phi: 0.0,
            n_pulses: 10_000,
            noise: NoiseParams::depolarizing_only(0.1),
            // A short metropolitan link with decent detectors, so a run of
            // 10^4 pulses leaves a few hundred counts per preparation bit.
            link: LinkParams {
                f_rep: 1e6,
                mu_photon: 0.15,
                alpha_abs: 0.02,
                length_km: 10.0,
                eta_det: 0.8,
                p_dark: 1e-6,
            },
            t0: 0,
            t1: 10_000,
            t2: 20_000,
        }
    }
}

impl ProtocolConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.theta > 0.0 && self.theta < std::f64::consts::FRAC_PI_2) {
            return Err(Error::OutOfRange {
                name: "theta",
                value: self.theta,
                lo: 0.0,
                hi: std::f64::consts::FRAC_PI_2,
            });
        }
        check_range("phi", self.phi, 0.0, std::f64::consts::TAU)?;
        if self.n_pulses == 0 {
            return Err(Error::OutOfRange {
                name: "n_pulses",
                value: 0.0,
                lo: 1.0,
                hi: f64::INFINITY,
            });
        }
        if !(self.t0 < self.t1 && self.t1 < self.t2) {
            return Err(Error::OutOfRange {
                name: "t0 < t1 < t2",
                value: self.t1 as f64,
                lo: self.t0 as f64,
                hi: self.t2 as f64,
            });
        }
        self.noise.validate()?;
        self.link.validate()
    }

    /// The honest conditional table Bob expects at these parameters.
    pub fn honest_probs(&self) -> Result<ConditionalProbs> {
        closed_form_cond_probs(&self.noise, self.theta, self.phi)
    }

    /// The discrimination-attack table at these parameters, Bob's default
    /// cheating hypothesis.
    pub fn cheat_probs(&self) -> Result<ConditionalProbs> {
        cheating_cond_probs(&self.noise, self.theta, self.phi)
    }

    /// Expected number of detected photons over the whole run.
    pub fn expected_detections(&self) -> f64 {
        self.n_pulses as f64 * self.link.per_pulse_yield()
    }
}

/// What Alice does with the photons.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Strategy {
    /// Measure the committed observable on every detection, immediately.
    Honest { c: Bit },
    Attack(AttackModel),
}

impl Strategy {
    pub fn validate(&self, noise: &NoiseParams) -> Result<()> {
        match self {
            Strategy::Honest { c } => check_range("c", f64::from(*c), 0.0, 1.0),
            Strategy::Attack(model) => model.validate(noise.total_depolarizing()),
        }
    }
}

/// One announced arrival: the tick and the pulse it belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrival {
    pub time: u64,
    pub pulse_index: u64,
}

/// The complete record of a finished session: Bob's secrets, Alice's
/// announcements and her opened outcomes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionTranscript {
    pub format_version: u32,
    pub strategy: Strategy,
    pub claimed_commitment: Bit,
    pub bob_bits: Vec<Bit>,
    pub emission_times: Vec<u64>,
    pub arrivals: Vec<Arrival>,
    pub outcomes: Vec<Bit>,
}

impl SessionTranscript {
    /// Assembles and validates a transcript. The opened outcome list must
    /// be index-aligned with the announced arrivals.
    pub fn new(
        strategy: Strategy,
        claimed_commitment: Bit,
        bob_bits: Vec<Bit>,
        emission_times: Vec<u64>,
        arrivals: Vec<Arrival>,
        outcomes: Vec<Bit>,
    ) -> Result<Self> {
        if outcomes.len() != arrivals.len() {
            return Err(Error::OpeningMismatch);
        }
        let t = Self {
            format_version: TRANSCRIPT_VERSION,
            strategy,
            claimed_commitment,
            bob_bits,
            emission_times,
            arrivals,
            outcomes,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let n_pulses = self.bob_bits.len();
        if self.emission_times.len() != n_pulses
            || self.arrivals.len() != self.outcomes.len()
            || self.arrivals.len() > n_pulses
        {
            return Err(Error::OpeningMismatch);
        }
        if !self.emission_times.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::OpeningMismatch);
        }
        let ascending = self
            .arrivals
            .windows(2)
            .all(|w| w[0].time < w[1].time && w[0].pulse_index < w[1].pulse_index);
        if !ascending || self.arrivals.iter().any(|a| a.pulse_index as usize >= n_pulses) {
            return Err(Error::OpeningMismatch);
        }
        Ok(())
    }

    /// Number of opened results, `n <= N`.
    pub fn detected(&self) -> usize {
        self.arrivals.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("transcript serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let t: Self = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            reason: e.to_string(),
        })?;
        if t.format_version != TRANSCRIPT_VERSION {
            return Err(Error::Parse {
                line: 0,
                reason: format!("unsupported transcript version {}", t.format_version),
            });
        }
        t.validate()?;
        Ok(t)
    }
}

/// Bob's initialization: a uniform secret bit string and the pulse
/// schedule carrying `|b_k>` at tick `t0 + k`.
pub fn bob_initialize<R: Rng + ?Sized>(cfg: &ProtocolConfig, rng: &mut R) -> (Vec<Bit>, Vec<u64>) {
    let bits = (0..cfg.n_pulses).map(|_| rng.gen_range(0..2) as Bit).collect();
    let schedule = (0..cfg.n_pulses).collect();
    (bits, schedule)
}

/// One received photon's fate in Alice's record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Entry {
    /// Outcome fixed at commitment time (measured or dark).
    Fixed(Bit),
    /// Photon parked in storage; measured only at the opening. `ideal`
    /// distinguishes a lossless non-demolition store from the configured
    /// noisy memory.
    Stored { ideal: bool },
}

/// Alice's private record between commitment and opening.
#[derive(Debug, Clone, PartialEq)]
pub struct AliceRecord {
    strategy: Strategy,
    arrivals: Vec<Arrival>,
    kinds: Vec<DetectionKind>,
    entries: Vec<Entry>,
}

impl AliceRecord {
    pub fn arrivals(&self) -> &[Arrival] {
        &self.arrivals
    }
}

fn outcome_rows(table: &ConditionalProbs, c: Bit) -> [[f64; 2]; 2] {
    [table.row(c, 0), table.row(c, 1)]
}

fn sample_row<R: Rng + ?Sized>(rows: &[[f64; 2]; 2], b: Bit, rng: &mut R) -> Bit {
    if rng.gen::<f64>() < rows[b as usize][0] {
        0
    } else {
        1
    }
}

/// The commitment phase: every detection is announced, and each photon is
/// either measured on the spot (honest parties and immediate attacks) or
/// parked in storage (memory attacks). Dark counts carry the detector's
/// own bit no matter the strategy.
pub fn alice_commit<R: Rng + ?Sized>(
    strategy: &Strategy,
    detections: &[Detection],
    bob_bits: &[Bit],
    cfg: &ProtocolConfig,
    rng: &mut R,
) -> Result<AliceRecord> {
    strategy.validate(&cfg.noise)?;

    // Immediate-measurement outcome rows, when the strategy has them.
    let immediate: Option<[[f64; 2]; 2]> = match strategy {
        Strategy::Honest { c } => Some(outcome_rows(&cfg.honest_probs()?, *c)),
        Strategy::Attack(AttackModel::Breidbart) => Some(outcome_rows(&cfg.cheat_probs()?, 0)),
        Strategy::Attack(AttackModel::AddedNoise { delta_p_d }) => {
            let noisy = cfg.noise.with_added_depolarizing(*delta_p_d)?;
            Some(outcome_rows(
                &cheating_cond_probs(&noisy, cfg.theta, cfg.phi)?,
                0,
            ))
        }
        Strategy::Attack(AttackModel::Memory { .. }) => None,
        Strategy::Attack(AttackModel::BoundedMemory { .. }) => {
            Some(outcome_rows(&cfg.cheat_probs()?, 0))
        }
        Strategy::Attack(AttackModel::NonDemolition { fallback, .. }) => {
            Some(outcome_rows(&attack_table(fallback, cfg)?, 0))
        }
    };

    let mut arrivals = Vec::with_capacity(detections.len());
    let mut kinds = Vec::with_capacity(detections.len());
    let mut entries = Vec::with_capacity(detections.len());
    for det in detections {
        arrivals.push(Arrival {
            time: cfg.t1 + det.pulse_index,
            pulse_index: det.pulse_index,
        });
        kinds.push(det.kind);
        let entry = match det.kind {
            DetectionKind::Dark => Entry::Fixed(det.dark_bit.expect("dark events carry a bit")),
            DetectionKind::Photon => {
                let b = bob_bits[det.pulse_index as usize];
                match strategy {
                    Strategy::Attack(AttackModel::Memory { .. }) => Entry::Stored { ideal: false },
                    Strategy::Attack(AttackModel::BoundedMemory { nu, .. }) => {
                        if rng.gen::<f64>() < *nu {
                            Entry::Stored { ideal: false }
                        } else {
                            Entry::Fixed(sample_row(immediate.as_ref().unwrap(), b, rng))
                        }
                    }
                    Strategy::Attack(AttackModel::NonDemolition { p_nd, .. }) => {
                        if rng.gen::<f64>() < *p_nd {
                            Entry::Stored { ideal: true }
                        } else {
                            Entry::Fixed(sample_row(immediate.as_ref().unwrap(), b, rng))
                        }
                    }
                    _ => Entry::Fixed(sample_row(immediate.as_ref().unwrap(), b, rng)),
                }
            }
        };
        entries.push(entry);
    }
    Ok(AliceRecord {
        strategy: strategy.clone(),
        arrivals,
        kinds,
        entries,
    })
}

/// A-priori outcome table of an attack model; claim-independent, since a
/// single measurement stream serves whichever commitment is opened.
fn attack_table(model: &AttackModel, cfg: &ProtocolConfig) -> Result<ConditionalProbs> {
    match model {
        AttackModel::Breidbart => cfg.cheat_probs(),
        AttackModel::AddedNoise { delta_p_d } => {
            let noisy = cfg.noise.with_added_depolarizing(*delta_p_d)?;
            cheating_cond_probs(&noisy, cfg.theta, cfg.phi)
        }
        AttackModel::Memory { p_d_delta_t } => {
            memory_attack_probs(&cfg.noise, *p_d_delta_t, cfg.theta, cfg.phi)
        }
        AttackModel::BoundedMemory { nu, inner } => {
            let stored = attack_table(inner, cfg)?;
            bounded_memory_probs(*nu, &stored, &cfg.cheat_probs()?)
        }
        AttackModel::NonDemolition { p_nd, fallback } => {
            let fallback = attack_table(fallback, cfg)?;
            bounded_memory_probs(*p_nd, &cfg.honest_probs()?, &fallback)
        }
    }
}

/// The opening phase: Alice reveals a commitment value and her full
/// outcome list, index-aligned with the announced arrivals. Stored photons
/// are measured now, with the claimed observable.
pub fn alice_open<R: Rng + ?Sized>(
    record: &AliceRecord,
    claimed_c: Bit,
    bob_bits: &[Bit],
    cfg: &ProtocolConfig,
    rng: &mut R,
) -> Result<(Bit, Vec<Bit>)> {
    // Outcome rows for stored photons, built once on first use. Stored
    // entries tagged `ideal` came from a lossless non-demolition store and
    // follow the honest table for the claimed observable; the rest follow
    // the strategy's own memory model.
    let mut stored_rows: Option<[[f64; 2]; 2]> = None;
    let mut ideal_rows: Option<[[f64; 2]; 2]> = None;

    let mut outcomes = Vec::with_capacity(record.entries.len());
    for (i, entry) in record.entries.iter().enumerate() {
        let outcome = match entry {
            Entry::Fixed(bit) => *bit,
            Entry::Stored { ideal } => {
                let rows: &[[f64; 2]; 2] = if *ideal {
                    if ideal_rows.is_none() {
                        ideal_rows = Some(outcome_rows(&cfg.honest_probs()?, claimed_c));
                    }
                    ideal_rows.as_ref().unwrap()
                } else {
                    if stored_rows.is_none() {
                        let model = match &record.strategy {
                            Strategy::Attack(AttackModel::Memory { p_d_delta_t }) => {
                                AttackModel::Memory {
                                    p_d_delta_t: *p_d_delta_t,
                                }
                            }
                            Strategy::Attack(AttackModel::BoundedMemory { inner, .. }) => {
                                (**inner).clone()
                            }
                            _ => return Err(Error::OpeningMismatch),
                        };
                        stored_rows =
                            Some(outcome_rows(&attack_table(&model, cfg)?, claimed_c));
                    }
                    stored_rows.as_ref().unwrap()
                };
                let b = bob_bits[record.arrivals[i].pulse_index as usize];
                sample_row(rows, b, rng)
            }
        };
        outcomes.push(outcome);
    }
    Ok((claimed_c, outcomes))
}

/// Runs a full session with the given claimed commitment: initialization,
/// transmission, commitment and opening. Deterministic under the seed.
pub fn run_session_with_claim<R: Rng + ?Sized>(
    cfg: &ProtocolConfig,
    strategy: &Strategy,
    claimed_c: Bit,
    rng: &mut R,
) -> Result<SessionTranscript> {
    cfg.validate()?;
    let (bob_bits, schedule) = bob_initialize(cfg, rng);
    let detections = transmit(&cfg.link, &schedule, rng);
    let record = alice_commit(strategy, &detections, &bob_bits, cfg, rng)?;
    let (claimed, outcomes) = alice_open(&record, claimed_c, &bob_bits, cfg, rng)?;
    let emission_times = (0..cfg.n_pulses).map(|k| cfg.t0 + k).collect();
    SessionTranscript::new(
        strategy.clone(),
        claimed,
        bob_bits,
        emission_times,
        record.arrivals,
        outcomes,
    )
}

/// Runs a full session. Honest Alice opens her actual commitment; an
/// attacker, having no preference between the two values, claims a
/// uniformly random one.
pub fn run_session<R: Rng + ?Sized>(
    cfg: &ProtocolConfig,
    strategy: &Strategy,
    rng: &mut R,
) -> Result<SessionTranscript> {
    let claimed = match strategy {
        Strategy::Honest { c } => *c,
        Strategy::Attack(_) => rng.gen_range(0..2) as Bit,
    };
    run_session_with_claim(cfg, strategy, claimed, rng)
}
