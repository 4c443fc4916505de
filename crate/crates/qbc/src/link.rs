//! The photonic transmission and detection model: pulse statistics,
//! fiber absorption, detector efficiency and dark counts, plus the
//! non-optical corrections they induce on the conditional probabilities.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channels::ConditionalProbs;
use crate::{check_range, Bit, Error, Result};

/// Source, fiber and detector parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkParams {
    /// Pulse repetition rate, pulses per second.
    pub f_rep: f64,
    /// Mean photons per pulse; emission is Bernoulli, multi-photon pulses
    /// are ignored, so this must stay well below 1.
    pub mu_photon: f64,
    /// Absorption coefficient as the base-10 exponent per km:
    /// `t_link = 10^(-alpha_abs * length_km)`.
    pub alpha_abs: f64,
    /// Fiber length in km.
    pub length_km: f64,
    /// Detector efficiency.
    pub eta_det: f64,
    /// Dark-count probability per gate, per detector.
    pub p_dark: f64,
}

impl Default for LinkParams {
    fn default() -> Self {
        Self {
            f_rep: 1e6,
            mu_photon: 0.1,
            alpha_abs: 0.05,
            length_km: 20.0,
            eta_det: 0.1,
            p_dark: 1e-5,
        }
    }
}

impl LinkParams {
    pub fn validate(&self) -> Result<()> {
        check_range("f_rep", self.f_rep, 0.0, f64::INFINITY)?;
        check_range("mu_photon", self.mu_photon, 0.0, 1.0)?;
        check_range("alpha_abs", self.alpha_abs, 0.0, f64::INFINITY)?;
        check_range("length_km", self.length_km, 0.0, f64::INFINITY)?;
        check_range("eta_det", self.eta_det, 0.0, 1.0)?;
        check_range("p_dark", self.p_dark, 0.0, 1.0)?;
        Ok(())
    }

    /// True when the single-photon approximation is getting shaky; callers
    /// should surface this as a warning, not an error.
    pub fn mu_warning(&self) -> bool {
        self.mu_photon > 0.2
    }

    /// Fiber survival probability `10^(-alpha L)`, clamped to `[0, 1]`.
    pub fn t_link(&self) -> f64 {
        t_link(self.alpha_abs, self.length_km)
    }

    /// Detected-photon rate `f_rep * mu * t_link * eta` in counts/second.
    pub fn raw_rate(&self) -> f64 {
        self.f_rep * self.mu_photon * self.t_link() * self.eta_det
    }

    /// Probability that a single pulse produces a detected photon.
    pub fn per_pulse_yield(&self) -> f64 {
        self.mu_photon * self.t_link() * self.eta_det
    }

    /// The dark-count error `delta_p = p_dark / (2 mu t_link eta)` added
    /// to the wrong outcome (and subtracted from the right one) on the
    /// matched rows. The crossed rows at `theta = pi/4` are already
    /// uniform, and dark counts fire both detectors equally, so their
    /// correction is zero.
    pub fn dark_count_correction(&self) -> Result<f64> {
        let yield_ = self.per_pulse_yield();
        if yield_ <= 0.0 {
            return Err(Error::ZeroYield);
        }
        Ok(self.p_dark / (2.0 * yield_))
    }
}

/// Fiber survival probability `10^(-alpha L)`, clamped to `[0, 1]`.
pub fn t_link(alpha_abs: f64, length_km: f64) -> f64 {
    10f64.powf(-alpha_abs * length_km).clamp(0.0, 1.0)
}

/// Applies the `+-delta` dark-count correction to the matched rows of a
/// conditional table, leaving the crossed rows alone. Row sums are
/// preserved exactly.
pub fn apply_dark_correction(cp: &ConditionalProbs, delta: f64) -> Result<ConditionalProbs> {
    let mut table = [[[0.0; 2]; 2]; 2];
    for c in 0..2u8 {
        for r in 0..2u8 {
            for b in 0..2u8 {
                let mut p = cp.prob(c, r, b);
                if c == b {
                    // wrong outcome gains delta, right outcome loses it
                    if r == b {
                        p -= delta;
                    } else {
                        p += delta;
                    }
                }
                table[c as usize][r as usize][b as usize] = p;
            }
        }
    }
    ConditionalProbs::from_table(table)
}

/// What one pulse produced at the receiving end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DetectionKind {
    /// A real photon arrived and was detected; its measurement outcome is
    /// decided by whoever measures it.
    Photon,
    /// No photon was seen but exactly one detector dark-fired; the
    /// recorded bit is whichever detector clicked.
    Dark,
}

/// A detection at the receiving end, before any measurement outcome is
/// attached to photon events.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Detection {
    pub pulse_index: u64,
    pub kind: DetectionKind,
    /// Set for dark events only.
    pub dark_bit: Option<Bit>,
}

/// Samples the link for every scheduled pulse. Per pulse: a photon is
/// emitted with probability `mu_photon`, survives the fiber with `t_link`
/// and is detected with `eta_det`. When no photon is detected, each of the
/// two detectors dark-fires with `p_dark`; a single fire yields that
/// detector's bit, a double fire is discarded as invalid.
pub fn transmit<R: Rng + ?Sized>(
    params: &LinkParams,
    schedule: &[u64],
    rng: &mut R,
) -> Vec<Detection> {
    let t = params.t_link();
    let mut events = Vec::new();
    for &pulse_index in schedule {
        let photon_detected = rng.gen::<f64>() < params.mu_photon
            && rng.gen::<f64>() < t
            && rng.gen::<f64>() < params.eta_det;
        if photon_detected {
            events.push(Detection {
                pulse_index,
                kind: DetectionKind::Photon,
                dark_bit: None,
            });
            continue;
        }
        let d0 = rng.gen::<f64>() < params.p_dark;
        let d1 = rng.gen::<f64>() < params.p_dark;
        if d0 != d1 {
            events.push(Detection {
                pulse_index,
                kind: DetectionKind::Dark,
                dark_bit: Some(if d1 { 1 } else { 0 }),
            });
        }
    }
    events
}

/// A finalized detection record: pulse index, measured outcome, event kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectionRecord {
    pub pulse_index: u64,
    pub outcome: Bit,
    pub kind: DetectionKind,
}

impl DetectionRecord {
    /// `pulse-index,outcome-bit,kind` with kind in `{photon, dark}`.
    pub fn to_line(&self) -> String {
        let kind = match self.kind {
            DetectionKind::Photon => "photon",
            DetectionKind::Dark => "dark",
        };
        format!("{},{},{}", self.pulse_index, self.outcome, kind)
    }

    pub fn from_line(line: &str, line_no: usize) -> Result<Self> {
        let parse = |reason: &str| Error::Parse {
            line: line_no,
            reason: reason.to_string(),
        };
        let mut parts = line.trim().split(',');
        let pulse_index = parts
            .next()
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| parse("expected pulse index"))?;
        let outcome: u8 = parts
            .next()
            .and_then(|s| s.trim().parse().ok())
            .filter(|b| *b < 2)
            .ok_or_else(|| parse("expected outcome bit"))?;
        let kind = match parts.next().map(str::trim) {
            Some("photon") => DetectionKind::Photon,
            Some("dark") => DetectionKind::Dark,
            _ => return Err(parse("expected kind photon|dark")),
        };
        if parts.next().is_some() {
            return Err(parse("trailing fields"));
        }
        Ok(Self {
            pulse_index,
            outcome,
            kind,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeds::rng_for;
    use approx::assert_relative_eq;

    #[test]
    fn fiber_survival_values() {
        assert_relative_eq!(t_link(0.05, 0.0), 1.0, epsilon = 1e-15);
        assert_relative_eq!(t_link(0.05, 20.0), 0.1, epsilon = 1e-15);
        assert_relative_eq!(t_link(0.05, 40.0), 0.01, epsilon = 1e-15);
    }

    #[test]
    fn raw_rate_is_the_product_of_the_factors() {
        let p = LinkParams::default();
        assert_relative_eq!(p.raw_rate(), 1e3, epsilon = 1e-9);

        let doubled = LinkParams {
            f_rep: 2e6,
            ..p
        };
        assert_relative_eq!(doubled.raw_rate(), 2.0 * p.raw_rate(), epsilon = 1e-9);

        let dead = LinkParams {
            eta_det: 0.0,
            ..p
        };
        assert_relative_eq!(dead.raw_rate(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn dark_count_correction_value() {
        let p = LinkParams::default();
        assert_relative_eq!(p.dark_count_correction().unwrap(), 0.005, epsilon = 1e-15);

        let clean = LinkParams {
            p_dark: 0.0,
            ..p
        };
        assert_relative_eq!(clean.dark_count_correction().unwrap(), 0.0, epsilon = 1e-15);

        let dead = LinkParams {
            mu_photon: 0.0,
            ..p
        };
        assert!(matches!(dead.dark_count_correction(), Err(Error::ZeroYield)));
    }

    #[test]
    fn corrected_rows_stay_normalized() {
        let cp = ConditionalProbs::ideal(std::f64::consts::FRAC_PI_4);
        // delta cannot exceed what the sharp rows can absorb
        let out = apply_dark_correction(&cp, 0.005).unwrap();
        for c in 0..2u8 {
            for b in 0..2u8 {
                let row = out.row(c, b);
                assert_relative_eq!(row[0] + row[1], 1.0, epsilon = 1e-15);
            }
        }
        assert_relative_eq!(out.prob(0, 1, 0), 0.005, epsilon = 1e-15);
        assert_relative_eq!(out.prob(0, 0, 1), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn dark_only_schedule() {
        let params = LinkParams {
            mu_photon: 0.0,
            p_dark: 0.05,
            ..LinkParams::default()
        };
        let schedule: Vec<u64> = (0..20_000).collect();
        let mut rng = rng_for(3, "link/dark-only");
        let events = transmit(&params, &schedule, &mut rng);
        assert!(!events.is_empty());
        assert!(events.iter().all(|e| e.kind == DetectionKind::Dark));
        // Single fires are near 2 p (1 - p) of pulses.
        let expect = 2.0 * 0.05 * 0.95 * 20_000.0;
        let sd = (20_000.0f64 * 2.0 * 0.05 * 0.95 * (1.0 - 2.0 * 0.05 * 0.95)).sqrt();
        assert!((events.len() as f64 - expect).abs() < 3.0 * sd);
    }

    #[test]
    fn detection_rate_matches_the_photon_budget() {
        let params = LinkParams {
            p_dark: 0.0,
            ..LinkParams::default()
        };
        let n = 1_000_000u64;
        let schedule: Vec<u64> = (0..n).collect();
        let mut rng = rng_for(11, "link/rate");
        let events = transmit(&params, &schedule, &mut rng);
        let p = params.per_pulse_yield();
        let expect = n as f64 * p;
        let sd = (n as f64 * p * (1.0 - p)).sqrt();
        assert!(
            (events.len() as f64 - expect).abs() < 3.0 * sd,
            "{} vs {}",
            events.len(),
            expect
        );
    }

    #[test]
    fn record_lines_roundtrip() {
        let rec = DetectionRecord {
            pulse_index: 42,
            outcome: 1,
            kind: DetectionKind::Dark,
        };
        assert_eq!(rec.to_line(), "42,1,dark");
        assert_eq!(DetectionRecord::from_line("42,1,dark", 1).unwrap(), rec);
        assert!(DetectionRecord::from_line("42,2,dark", 3).is_err());
        assert!(matches!(
            DetectionRecord::from_line("oops", 7),
            Err(Error::Parse { line: 7, .. })
        ));
    }
}
