//! Distinguishability analytics over conditional-probability tables:
//! fidelity (the Bhattacharyya coefficient), relative entropy
//! (Kullback-Leibler divergence), their four-row averages, and the scan
//! locating the angle where the two security requirements balance.

use serde::{Deserialize, Serialize};

use crate::channels::{closed_form_cond_probs, ConditionalProbs, NoiseParams};
use crate::{Error, Result};

/// A discrete probability distribution over a finite outcome set.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.iter().any(|p| !(0.0..=1.0 + 1e-12).contains(p))
            || (probs.iter().sum::<f64>() - 1.0).abs() > 1e-12
        {
            return Err(Error::NotADistribution(probs));
        }
        Ok(Self { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// A two-outcome row of a conditional table.
    pub fn from_row(row: [f64; 2]) -> Self {
        Self {
            probs: row.to_vec(),
        }
    }
}

/// Fidelity `F(p, q) = sum_i sqrt(p_i q_i)`, the Bhattacharyya
/// coefficient: 1 for identical distributions, 0 for disjoint supports.
///
/// ```
/// use qbc::metrics::{fidelity, Distribution};
/// let sharp = Distribution::new(vec![1.0, 0.0]).unwrap();
/// let flat = Distribution::new(vec![0.5, 0.5]).unwrap();
/// assert!((fidelity(&sharp, &flat).unwrap() - 1.0 / 2f64.sqrt()).abs() < 1e-15);
/// ```
pub fn fidelity(p: &Distribution, q: &Distribution) -> Result<f64> {
    if p.probs.len() != q.probs.len() {
        return Err(Error::LengthMismatch(p.probs.len(), q.probs.len()));
    }
    Ok(p.probs
        .iter()
        .zip(&q.probs)
        .map(|(a, b)| (a * b).sqrt())
        .sum())
}

/// Relative entropy with an explicit infinity flag for support mismatches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RelEntropy {
    Finite(f64),
    /// `p` puts weight where `q` has none: no finite value exists.
    Infinite,
}

impl RelEntropy {
    pub fn is_infinite(&self) -> bool {
        matches!(self, RelEntropy::Infinite)
    }

    pub fn finite(&self) -> Option<f64> {
        match self {
            RelEntropy::Finite(v) => Some(*v),
            RelEntropy::Infinite => None,
        }
    }
}

/// Relative entropy `S(p||q) = sum_i p_i ln(p_i / q_i)` in nats, with the
/// convention `0 ln 0 = 0`.
pub fn relative_entropy(p: &Distribution, q: &Distribution) -> Result<RelEntropy> {
    if p.probs.len() != q.probs.len() {
        return Err(Error::LengthMismatch(p.probs.len(), q.probs.len()));
    }
    let mut total = 0.0;
    for (&a, &b) in p.probs.iter().zip(&q.probs) {
        if a == 0.0 {
            continue;
        }
        if b == 0.0 {
            return Ok(RelEntropy::Infinite);
        }
        total += a * (a / b).ln();
    }
    Ok(RelEntropy::Finite(total))
}

fn row(cp: &ConditionalProbs, c: u8, b: u8) -> Distribution {
    Distribution::from_row(cp.row(c, b))
}

/// Average fidelity between a reference table and a candidate table: the
/// arithmetic mean of the four row fidelities `F(p_c(*|b), p_c'(*|b))`.
pub fn avg_fidelity_noise(reference: &ConditionalProbs, candidate: &ConditionalProbs) -> f64 {
    let mut total = 0.0;
    for c in 0..2u8 {
        for b in 0..2u8 {
            total += fidelity(&row(reference, c, b), &row(candidate, c, b))
                .expect("rows have equal length");
        }
    }
    total / 4.0
}

/// State distinguishability within one table: how well the outcome rows
/// separate the preparations `|0>` and `|1>`, averaged over the two
/// observables. Uses squared row coefficients, so the noiseless value is
/// `cos^2(theta)`, the fidelity of the underlying qubit states.
pub fn avg_fidelity_states(cp: &ConditionalProbs) -> f64 {
    let f0 = fidelity(&row(cp, 0, 0), &row(cp, 0, 1)).expect("rows have equal length");
    let f1 = fidelity(&row(cp, 1, 0), &row(cp, 1, 1)).expect("rows have equal length");
    (f0 * f0 + f1 * f1) / 2.0
}

/// Observable distinguishability within one table: how well the outcome
/// rows separate the two commitment measurements, averaged over the two
/// preparations. Squared row coefficients again; noiseless value
/// `sin^2(theta)`.
pub fn avg_fidelity_observables(cp: &ConditionalProbs) -> f64 {
    let f0 = fidelity(&row(cp, 0, 0), &row(cp, 1, 0)).expect("rows have equal length");
    let f1 = fidelity(&row(cp, 0, 1), &row(cp, 1, 1)).expect("rows have equal length");
    (f0 * f0 + f1 * f1) / 2.0
}

fn sum_entropies(parts: &[RelEntropy], scale: f64) -> RelEntropy {
    let mut total = 0.0;
    for part in parts {
        match part {
            RelEntropy::Infinite => return RelEntropy::Infinite,
            RelEntropy::Finite(v) => total += v,
        }
    }
    RelEntropy::Finite(total * scale)
}

/// Average relative entropy of a candidate table against a reference:
/// `<S> = 1/4 sum_{c,b} S(reference_row || candidate_row)`. The reference
/// goes first; this is the direction that asks how likely the candidate
/// source is to reproduce reference-looking statistics.
pub fn avg_entropy_noise(reference: &ConditionalProbs, candidate: &ConditionalProbs) -> RelEntropy {
    let mut parts = Vec::with_capacity(4);
    for c in 0..2u8 {
        for b in 0..2u8 {
            parts.push(
                relative_entropy(&row(reference, c, b), &row(candidate, c, b))
                    .expect("rows have equal length"),
            );
        }
    }
    sum_entropies(&parts, 0.25)
}

/// State-distinguishability relative entropies, both argument orders:
/// `(<S(|0> || |1>)>, <S(|1> || |0>)>)`.
pub fn avg_entropy_states(cp: &ConditionalProbs) -> (RelEntropy, RelEntropy) {
    let fwd = [
        relative_entropy(&row(cp, 0, 0), &row(cp, 0, 1)).expect("rows have equal length"),
        relative_entropy(&row(cp, 1, 0), &row(cp, 1, 1)).expect("rows have equal length"),
    ];
    let rev = [
        relative_entropy(&row(cp, 0, 1), &row(cp, 0, 0)).expect("rows have equal length"),
        relative_entropy(&row(cp, 1, 1), &row(cp, 1, 0)).expect("rows have equal length"),
    ];
    (sum_entropies(&fwd, 0.5), sum_entropies(&rev, 0.5))
}

/// Observable-distinguishability relative entropies, both argument orders:
/// `(<S(C_0 || C_1)>, <S(C_1 || C_0)>)`.
pub fn avg_entropy_observables(cp: &ConditionalProbs) -> (RelEntropy, RelEntropy) {
    let fwd = [
        relative_entropy(&row(cp, 0, 0), &row(cp, 1, 0)).expect("rows have equal length"),
        relative_entropy(&row(cp, 0, 1), &row(cp, 1, 1)).expect("rows have equal length"),
    ];
    let rev = [
        relative_entropy(&row(cp, 1, 0), &row(cp, 0, 0)).expect("rows have equal length"),
        relative_entropy(&row(cp, 1, 1), &row(cp, 0, 1)).expect("rows have equal length"),
    ];
    (sum_entropies(&fwd, 0.5), sum_entropies(&rev, 0.5))
}

/// Result of a [`theta_balance_scan`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThetaScan {
    /// Grid angle minimizing the balance gap.
    pub theta_star: f64,
    /// `(theta, |<F(states)> - <F(observables)>|)` over the grid.
    pub surface: Vec<(f64, f64)>,
    /// Set when the surface is flat to within 1e-12 (fully randomized
    /// noise): every angle behaves the same and `theta_star` is arbitrary.
    pub degenerate: bool,
}

/// Default resolution for state-angle scans.
pub const DEFAULT_THETA_GRID_POINTS: usize = 1000;

/// Uniform grid of `n` interior points on `(0, pi/2)`.
pub fn theta_grid(n: usize) -> Vec<f64> {
    let step = std::f64::consts::FRAC_PI_2 / (n + 1) as f64;
    (1..=n).map(|i| i as f64 * step).collect()
}

/// Scans `|<F(states)> - <F(observables)>|` over a grid of state angles
/// and returns the minimizing angle together with the full surface.
pub fn theta_balance_scan(params: &NoiseParams, grid: &[f64]) -> Result<ThetaScan> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let mut surface = Vec::with_capacity(grid.len());
    for &theta in grid {
        let cp = closed_form_cond_probs(params, theta, 0.0)?;
        let gap = (avg_fidelity_states(&cp) - avg_fidelity_observables(&cp)).abs();
        surface.push((theta, gap));
    }
    let (mut best, mut lo, mut hi) = (surface[0], surface[0].1, surface[0].1);
    for &(theta, gap) in &surface[1..] {
        if gap < best.1 {
            best = (theta, gap);
        }
        lo = lo.min(gap);
        hi = hi.max(gap);
    }
    Ok(ThetaScan {
        theta_star: best.0,
        surface,
        degenerate: hi - lo < 1e-12,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, LN_2};

    fn dist(row: [f64; 2]) -> Distribution {
        Distribution::from_row(row)
    }

    #[test]
    fn fidelity_reference_values() {
        let p = dist([1.0, 0.0]);
        assert_relative_eq!(fidelity(&p, &p).unwrap(), 1.0, epsilon = 1e-15);
        assert_relative_eq!(
            fidelity(&p, &dist([0.0, 1.0])).unwrap(),
            0.0,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            fidelity(&p, &dist([0.5, 0.5])).unwrap(),
            std::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-15
        );
        let q = Distribution::new(vec![0.2, 0.3, 0.5]).unwrap();
        assert!(matches!(
            fidelity(&p, &q),
            Err(Error::LengthMismatch(2, 3))
        ));
    }

    #[test]
    fn fidelity_is_symmetric_and_bounded() {
        for i in 0..20 {
            let a = i as f64 / 20.0;
            for j in 0..20 {
                let b = j as f64 / 20.0;
                let p = dist([a, 1.0 - a]);
                let q = dist([b, 1.0 - b]);
                let f = fidelity(&p, &q).unwrap();
                assert!((0.0..=1.0 + 1e-12).contains(&f));
                assert_relative_eq!(f, fidelity(&q, &p).unwrap(), epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn relative_entropy_reference_values() {
        let p = dist([1.0, 0.0]);
        assert_eq!(
            relative_entropy(&p, &p).unwrap(),
            RelEntropy::Finite(0.0)
        );
        assert_relative_eq!(
            relative_entropy(&p, &dist([0.5, 0.5]))
                .unwrap()
                .finite()
                .unwrap(),
            LN_2,
            epsilon = 1e-15
        );
        assert!(relative_entropy(&p, &dist([0.0, 1.0])).unwrap().is_infinite());
    }

    #[test]
    fn relative_entropy_nonnegative_and_asymmetric() {
        for i in 1..20 {
            let a = i as f64 / 20.0;
            for j in 1..20 {
                let b = j as f64 / 20.0;
                let s = relative_entropy(&dist([a, 1.0 - a]), &dist([b, 1.0 - b]))
                    .unwrap()
                    .finite()
                    .unwrap();
                assert!(s >= -1e-15);
                if i == j {
                    assert!(s.abs() < 1e-15);
                }
            }
        }
        // Concrete asymmetry witness.
        let p = dist([0.9, 0.1]);
        let q = dist([0.5, 0.5]);
        let fwd = relative_entropy(&p, &q).unwrap().finite().unwrap();
        let rev = relative_entropy(&q, &p).unwrap().finite().unwrap();
        assert!((fwd - rev).abs() > 0.05);
    }

    #[test]
    fn noise_fidelity_against_full_mixing() {
        let ideal = ConditionalProbs::ideal(FRAC_PI_4);
        assert_relative_eq!(avg_fidelity_noise(&ideal, &ideal), 1.0, epsilon = 1e-15);

        // Two sharp rows against uniform give 1/sqrt(2), two uniform rows 1.
        let expected = 0.5 * (std::f64::consts::FRAC_1_SQRT_2 + 1.0);
        assert_relative_eq!(
            avg_fidelity_noise(&ideal, &ConditionalProbs::uniform()),
            expected,
            epsilon = 1e-15
        );
    }

    #[test]
    fn noise_fidelity_decreases_along_white_noise() {
        let ideal = ConditionalProbs::ideal(FRAC_PI_4);
        let mut last = 1.0 + 1e-12;
        for i in 0..=50 {
            let p_d = i as f64 / 50.0;
            let cp =
                closed_form_cond_probs(&NoiseParams::depolarizing_only(p_d), FRAC_PI_4, 0.0)
                    .unwrap();
            let f = avg_fidelity_noise(&ideal, &cp);
            assert!(f < last, "not monotone at p_d = {p_d}");
            last = f;
        }
    }

    #[test]
    fn state_and_observable_fidelities_noiseless() {
        for i in 1..100 {
            let theta = i as f64 / 100.0 * FRAC_PI_2;
            let cp = ConditionalProbs::ideal(theta);
            assert_relative_eq!(
                avg_fidelity_states(&cp),
                theta.cos().powi(2),
                epsilon = 1e-12
            );
            assert_relative_eq!(
                avg_fidelity_observables(&cp),
                theta.sin().powi(2),
                epsilon = 1e-12
            );
        }
        // Orthogonal preparations are perfectly distinguishable, and
        // relabeled-identical observables are not distinguishable at all.
        assert!(avg_fidelity_states(&ConditionalProbs::ideal(FRAC_PI_2)) < 1e-15);
        assert!(avg_fidelity_observables(&ConditionalProbs::ideal(1e-9)) < 1e-12);
        assert_relative_eq!(
            avg_fidelity_states(&ConditionalProbs::uniform()),
            1.0,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            avg_fidelity_observables(&ConditionalProbs::uniform()),
            1.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn balance_holds_at_pi_over_4_for_all_white_noise() {
        for i in 0..=100 {
            let p_d = i as f64 / 100.0;
            let cp =
                closed_form_cond_probs(&NoiseParams::depolarizing_only(p_d), FRAC_PI_4, 0.0)
                    .unwrap();
            assert_relative_eq!(
                avg_fidelity_states(&cp),
                avg_fidelity_observables(&cp),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn entropy_averages_reference_points() {
        let ideal = ConditionalProbs::ideal(FRAC_PI_4);
        assert_eq!(avg_entropy_noise(&ideal, &ideal), RelEntropy::Finite(0.0));

        // With a little white noise everything is finite and the state and
        // observable distinguishabilities coincide at theta = pi/4.
        let cp = closed_form_cond_probs(&NoiseParams::depolarizing_only(0.1), FRAC_PI_4, 0.0)
            .unwrap();
        let (s_states, _) = avg_entropy_states(&cp);
        let (s_obs, _) = avg_entropy_observables(&cp);
        assert_relative_eq!(
            s_states.finite().unwrap(),
            s_obs.finite().unwrap(),
            epsilon = 1e-12
        );

        // Noiseless rows have disjoint supports, so both directions flag
        // infinite distinguishability.
        let (fwd, rev) = avg_entropy_states(&ideal);
        assert!(fwd.is_infinite() && rev.is_infinite());
    }

    #[test]
    fn theta_scan_finds_the_balance_angle() {
        let grid = theta_grid(1000);
        let scan = theta_balance_scan(&NoiseParams::zero(), &grid).unwrap();
        assert!(!scan.degenerate);
        assert!((scan.theta_star - FRAC_PI_4).abs() < FRAC_PI_2 / 1000.0);

        // Full mixing flattens the surface: any angle works.
        let scan = theta_balance_scan(&NoiseParams::depolarizing_only(1.0), &grid).unwrap();
        assert!(scan.degenerate);
        assert!(scan.surface.iter().all(|&(_, gap)| gap < 1e-12));

        // Total bit-flip randomness does the same.
        let flips = NoiseParams {
            p_b_prep: 0.5,
            ..NoiseParams::zero()
        };
        let scan = theta_balance_scan(&flips, &grid).unwrap();
        assert!(scan.degenerate);

        assert!(matches!(
            theta_balance_scan(&NoiseParams::zero(), &[]),
            Err(Error::EmptyGrid)
        ));
    }
}
