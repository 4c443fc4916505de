//! Bob's statistical decision machinery: outcome tallies, binomial and
//! normal likelihood helpers, the sigma-threshold acceptance test, and the
//! solvers for the maximum tolerable white noise and memory noise.
//!
//! The decisive statistic for a claimed commitment `c` is the row
//! conditioned on the *other* preparation, `b = 1 - c`: at the optimal
//! state angle, an honest party's cross row is exactly uniform while the
//! discrimination attack biases it, so that row separates the hypotheses.
//! The matched row carries the security gate against delayed-measurement
//! attacks whenever the operating point supports it.

use serde::{Deserialize, Serialize};

use crate::adversary::cheating_cond_probs;
use crate::channels::{closed_form_cond_probs, ConditionalProbs, NoiseParams};
use crate::protocol::SessionTranscript;
use crate::{check_range, Bit, Error, Result};

/// Cross-tabulated counts `n(r|b)` of opened outcomes against Bob's
/// preparation bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    counts: [[u64; 2]; 2],
}

impl Tally {
    pub fn from_counts(counts: [[u64; 2]; 2]) -> Self {
        Self { counts }
    }

    /// `n(r|b)`.
    pub fn count(&self, r: Bit, b: Bit) -> u64 {
        self.counts[r as usize][b as usize]
    }

    /// `n(b) = n(0|b) + n(1|b)`.
    pub fn n_b(&self, b: Bit) -> u64 {
        self.counts[0][b as usize] + self.counts[1][b as usize]
    }

    pub fn total(&self) -> u64 {
        self.n_b(0) + self.n_b(1)
    }

    /// Observed fraction `q(r|b) = n(r|b) / n(b)`, undefined on empty rows.
    pub fn q(&self, r: Bit, b: Bit) -> Option<f64> {
        let n = self.n_b(b);
        (n > 0).then(|| self.count(r, b) as f64 / n as f64)
    }
}

/// Builds the tally for a transcript against Bob's record of his
/// preparation bits.
pub fn tally(transcript: &SessionTranscript, bob_bits: &[Bit]) -> Tally {
    let mut counts = [[0u64; 2]; 2];
    for (arrival, outcome) in transcript.arrivals.iter().zip(&transcript.outcomes) {
        let b = bob_bits[arrival.pulse_index as usize];
        counts[*outcome as usize][b as usize] += 1;
    }
    Tally { counts }
}

/// Binomial probability `C(n, k) p^k (1-p)^(n-k)`, computed in log space.
pub fn binomial_likelihood(n: u64, k: u64, p: f64) -> Result<f64> {
    if k > n {
        return Err(Error::CountExceedsTrials { k, n });
    }
    check_range("p", p, 0.0, 1.0)?;
    if p == 0.0 {
        return Ok(if k == 0 { 1.0 } else { 0.0 });
    }
    if p == 1.0 {
        return Ok(if k == n { 1.0 } else { 0.0 });
    }
    let ln_choose: f64 = (1..=k.min(n - k))
        .map(|i| ((n - k.min(n - k) + i) as f64 / i as f64).ln())
        .sum();
    let ln_p = ln_choose + k as f64 * p.ln() + (n - k) as f64 * (1.0 - p).ln();
    Ok(ln_p.exp())
}

/// Lower-tail binomial probability `P(K <= k)`.
pub fn binomial_cdf(n: u64, k: u64, p: f64) -> Result<f64> {
    let mut total = 0.0;
    for i in 0..=k.min(n) {
        total += binomial_likelihood(n, i, p)?;
    }
    Ok(total.min(1.0))
}

/// Normal approximation to the binomial in fraction-of-counts units:
/// `mu = p`, `sigma = sqrt(p (1-p) / n)`.
pub fn normal_params(p: f64, n: u64) -> Result<(f64, f64)> {
    check_range("p", p, 0.0, 1.0)?;
    if n == 0 {
        return Err(Error::OutOfRange {
            name: "n",
            value: 0.0,
            lo: 1.0,
            hi: f64::INFINITY,
        });
    }
    Ok((p, (p * (1.0 - p) / n as f64).sqrt()))
}

/// Standard normal CDF via an erf polynomial (absolute error ~1.5e-7).
pub fn normal_cdf(x: f64, mu: f64, sigma: f64) -> f64 {
    if sigma <= 0.0 {
        return if x < mu { 0.0 } else { 1.0 };
    }
    0.5 * (1.0 + erf((x - mu) / (sigma * std::f64::consts::SQRT_2)))
}

fn erf(x: f64) -> f64 {
    let sign = x.signum();
    let x = x.abs();
    let t = 1.0 / (1.0 + 0.327_591_1 * x);
    let poly = t
        * (0.254_829_592
            + t * (-0.284_496_736 + t * (1.421_413_741 + t * (-1.453_152_027 + t * 1.061_405_429))));
    sign * (1.0 - poly * (-x * x).exp())
}

/// Sigma multiples for the viability (`alpha`) and security (`beta`)
/// thresholds, plus the minimum acceptable detection yield.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub alpha_sigmas: f64,
    pub beta_sigmas: f64,
    /// Reject when fewer than this fraction of the expected detections
    /// were announced. Zero disables the check.
    pub min_yield_fraction: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            alpha_sigmas: 2.0,
            beta_sigmas: 2.0,
            min_yield_fraction: 0.0,
        }
    }
}

impl Thresholds {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha_sigmas > 0.0) || !(self.beta_sigmas > 0.0) {
            return Err(Error::OutOfRange {
                name: "sigmas",
                value: self.alpha_sigmas.min(self.beta_sigmas),
                lo: f64::MIN_POSITIVE,
                hi: f64::INFINITY,
            });
        }
        check_range("min_yield_fraction", self.min_yield_fraction, 0.0, 1.0)
    }
}

/// Per-row diagnostics of an acceptance test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RowCheck {
    pub b: Bit,
    pub n: u64,
    /// Observed fraction of outcome 1.
    pub observed: Option<f64>,
    pub honest_mean: f64,
    pub honest_sigma: f64,
    pub cheat_mean: f64,
    pub cheat_sigma: f64,
    /// `(observed - honest_mean) / honest_sigma`.
    pub z_honest: Option<f64>,
    /// `(observed - cheat_mean) / cheat_sigma`.
    pub z_cheat: Option<f64>,
    /// Binomial likelihood of the observed count under the honest row.
    pub honest_likelihood: Option<f64>,
    /// Binomial likelihood of the observed count under the cheat row.
    pub cheat_likelihood: Option<f64>,
    /// Observed fraction within `alpha_sigmas` of the honest mean on the
    /// side facing the cheat mean.
    pub alpha_pass: Option<bool>,
    /// Observed fraction beyond `beta_sigmas` on the honest side of the
    /// cheat mean.
    pub beta_pass: Option<bool>,
    /// Whether the honest alpha band and the cheat beta band are disjoint
    /// at this sample size, i.e. whether the security gate has teeth.
    pub separable: bool,
}

/// Outcome of Bob's acceptance test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Decision {
    Accept(Bit),
    Reject,
}

/// The verdict with the statistics that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub decision: Decision,
    pub claimed: Bit,
    /// Diagnostics for the rows conditioned on `b = 0` and `b = 1`.
    pub rows: [RowCheck; 2],
    /// The row that separates the hypotheses for this claim (`b != c`).
    pub decisive_b: Bit,
    /// An empty row made the test inconclusive (folded into reject).
    pub inconclusive: bool,
    /// Fewer detections than the configured minimum yield.
    pub low_yield: bool,
    /// The decisive row was separable, so the accept carries the security
    /// guarantee and not just viability.
    pub secure: bool,
}

fn row_check(
    t: &Tally,
    b: Bit,
    honest_mean: f64,
    cheat_mean: f64,
    th: &Thresholds,
) -> RowCheck {
    let n = t.n_b(b);
    let observed = t.q(1, b);
    let (honest_sigma, cheat_sigma) = if n > 0 {
        (
            (honest_mean * (1.0 - honest_mean) / n as f64).sqrt(),
            (cheat_mean * (1.0 - cheat_mean) / n as f64).sqrt(),
        )
    } else {
        (0.0, 0.0)
    };
    let z = |mean: f64, sigma: f64| {
        observed.map(|q| {
            if sigma > 0.0 {
                (q - mean) / sigma
            } else if q == mean {
                0.0
            } else {
                f64::INFINITY.copysign(q - mean)
            }
        })
    };
    let z_honest = z(honest_mean, honest_sigma);
    let z_cheat = z(cheat_mean, cheat_sigma);
    let likelihood = |mean: f64| {
        observed.map(|_| {
            binomial_likelihood(n, t.count(1, b), mean).expect("count within trials")
        })
    };

    let toward = cheat_mean - honest_mean;
    let alpha_pass = observed.map(|q| {
        if toward > 0.0 {
            q <= honest_mean + th.alpha_sigmas * honest_sigma
        } else if toward < 0.0 {
            q >= honest_mean - th.alpha_sigmas * honest_sigma
        } else {
            (q - honest_mean).abs() <= th.alpha_sigmas * honest_sigma
        }
    });
    let beta_pass = observed.map(|q| {
        if toward > 0.0 {
            q <= cheat_mean - th.beta_sigmas * cheat_sigma
        } else if toward < 0.0 {
            q >= cheat_mean + th.beta_sigmas * cheat_sigma
        } else {
            true
        }
    });
    let separable = n > 0
        && if toward > 0.0 {
            honest_mean + th.alpha_sigmas * honest_sigma
                <= cheat_mean - th.beta_sigmas * cheat_sigma
        } else if toward < 0.0 {
            cheat_mean + th.beta_sigmas * cheat_sigma
                <= honest_mean - th.alpha_sigmas * honest_sigma
        } else {
            false
        };

    RowCheck {
        b,
        n,
        observed,
        honest_mean,
        honest_sigma,
        cheat_mean,
        cheat_sigma,
        z_honest,
        z_cheat,
        honest_likelihood: likelihood(honest_mean),
        cheat_likelihood: likelihood(cheat_mean),
        alpha_pass,
        beta_pass,
        separable,
    }
}

/// Bob's acceptance test for a claimed commitment.
///
/// The claim is accepted when the decisive cross row sits within
/// `alpha_sigmas` of its honest mean on the side facing the cheat
/// hypothesis, and every separable row additionally sits beyond
/// `beta_sigmas` on the honest side of the cheat mean. Rows whose bands
/// overlap at this sample size cannot carry a security gate; their
/// z-scores are still reported. An empty row, or a detection count below
/// the minimum yield, folds into a reject with the corresponding flag.
pub fn accept_test(
    t: &Tally,
    claimed_c: Bit,
    expected_honest: &ConditionalProbs,
    expected_cheat: &ConditionalProbs,
    th: &Thresholds,
    expected_detections: Option<f64>,
) -> Verdict {
    let rows = [0u8, 1u8].map(|b| {
        row_check(
            t,
            b,
            expected_honest.prob(claimed_c, 1, b),
            expected_cheat.prob(claimed_c, 1, b),
            th,
        )
    });
    let decisive_b = 1 - claimed_c;
    let matched_b = claimed_c;

    let inconclusive = rows.iter().any(|r| r.n == 0);
    let low_yield = expected_detections
        .map(|e| (t.total() as f64) < th.min_yield_fraction * e)
        .unwrap_or(false);

    let decisive = &rows[decisive_b as usize];
    let matched = &rows[matched_b as usize];
    let decisive_ok = decisive.alpha_pass == Some(true)
        && (!decisive.separable || decisive.beta_pass == Some(true));
    let matched_ok = !matched.separable || matched.beta_pass == Some(true);

    let accept = !inconclusive && !low_yield && decisive_ok && matched_ok;
    Verdict {
        decision: if accept {
            Decision::Accept(claimed_c)
        } else {
            Decision::Reject
        },
        claimed: claimed_c,
        rows,
        decisive_b,
        inconclusive,
        low_yield,
        secure: decisive.separable,
    }
}

/// Separation slack of the decisive cross row under pure white noise
/// `p_d`: the gap `(mu_ch - k_beta sigma_ch) - (mu_0 + k_alpha sigma_0)`.
/// Security needs it non-negative; it shrinks as noise grows.
pub fn white_noise_slack(
    p_d: f64,
    alpha_sigmas: f64,
    beta_sigmas: f64,
    n_per_state: u64,
    theta: f64,
) -> Result<f64> {
    let params = NoiseParams::depolarizing_only(p_d);
    let honest = closed_form_cond_probs(&params, theta, 0.0)?.prob(0, 1, 1);
    let cheat = cheating_cond_probs(&params, theta, 0.0)?.prob(0, 1, 1);
    let (_, s_h) = normal_params(honest, n_per_state)?;
    let (_, s_c) = normal_params(cheat, n_per_state)?;
    Ok((cheat - beta_sigmas * s_c) - (honest + alpha_sigmas * s_h))
}

/// Separation slack of the matched row for a delayed measurement carrying
/// `p_d_delta_t` of storage noise on top of channel noise `p_d`:
/// `(mu_0 - k_alpha sigma_0) - (mu_dt + k_beta sigma_dt)`. Detection
/// needs it non-negative; it grows with the storage noise.
pub fn memory_slack(
    p_d: f64,
    p_d_delta_t: f64,
    alpha_sigmas: f64,
    beta_sigmas: f64,
    n_per_state: u64,
    theta: f64,
) -> Result<f64> {
    let params = NoiseParams::depolarizing_only(p_d);
    let honest = closed_form_cond_probs(&params, theta, 0.0)?.prob(0, 0, 0);
    let delayed = 1.0 - (p_d + p_d_delta_t) / 2.0;
    check_range("p_d + p_d_delta_t", p_d + p_d_delta_t, 0.0, 1.0)?;
    let (_, s_h) = normal_params(honest, n_per_state)?;
    let (_, s_d) = normal_params(delayed, n_per_state)?;
    Ok((honest - alpha_sigmas * s_h) - (delayed + beta_sigmas * s_d))
}

/// Largest white-noise coefficient, on a 1e-3 grid, at which the honest
/// alpha band and the discrimination-attack beta band still separate on
/// the decisive cross row. `None` when no grid point separates.
pub fn solve_pd_star(
    alpha_sigmas: f64,
    beta_sigmas: f64,
    n_per_state: u64,
    theta: f64,
) -> Result<Option<f64>> {
    check_range("alpha_sigmas", alpha_sigmas, f64::MIN_POSITIVE, f64::INFINITY)?;
    check_range("beta_sigmas", beta_sigmas, f64::MIN_POSITIVE, f64::INFINITY)?;
    let mut best = None;
    for i in 0..=1000u32 {
        let p_d = i as f64 / 1000.0;
        if white_noise_slack(p_d, alpha_sigmas, beta_sigmas, n_per_state, theta)? >= 0.0 {
            best = Some(p_d);
        }
    }
    Ok(best)
}

/// Threshold memory noise for the delayed-measurement attack at fixed
/// channel noise `p_d`: the smallest `p_d(dt)` on a 1e-3 grid at which the
/// delayed matched row separates below the honest alpha band, i.e. the
/// most storage decoherence an attacker can carry before the tally gives
/// her away. `None` when no grid point separates.
pub fn solve_pd_delta_star(
    p_d: f64,
    alpha_sigmas: f64,
    beta_sigmas: f64,
    n_per_state: u64,
    theta: f64,
) -> Result<Option<f64>> {
    check_range("p_d", p_d, 0.0, 1.0)?;
    check_range("alpha_sigmas", alpha_sigmas, f64::MIN_POSITIVE, f64::INFINITY)?;
    check_range("beta_sigmas", beta_sigmas, f64::MIN_POSITIVE, f64::INFINITY)?;
    // Matched row, fraction of outcome 0 on |0>: 1 - p_d/2 for the honest
    // party, 1 - (p_d + x)/2 delayed. The slack grows with x, so the
    // threshold is the first separating grid point.
    let steps = ((1.0 - p_d) * 1000.0).floor() as u32;
    for i in 0..=steps {
        let x = i as f64 / 1000.0;
        if memory_slack(p_d, x, alpha_sigmas, beta_sigmas, n_per_state, theta)? >= 0.0 {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::{run_session, ProtocolConfig, Strategy};
    use crate::seeds::rng_for;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn tally_cross_tabulates_by_preparation_bit() {
        let cfg = ProtocolConfig {
            noise: NoiseParams::zero(),
            ..ProtocolConfig::default()
        };
        let mut rng = rng_for(2, "verify/tally");
        let t = run_session(&cfg, &Strategy::Honest { c: 0 }, &mut rng).unwrap();
        let tl = tally(&t, &t.bob_bits);
        assert_eq!(tl.total() as usize, t.detected());
        // Noiseless honest C_0 on |0>: q(0|0) = 1 (up to rare dark counts).
        assert!(tl.q(0, 0).unwrap() > 0.999);

        let empty = Tally::from_counts([[0, 0], [0, 0]]);
        assert_eq!(empty.q(0, 0), None);
        assert_eq!(empty.total(), 0);

        let synthetic = Tally::from_counts([[30, 10], [20, 40]]);
        assert_relative_eq!(synthetic.q(0, 0).unwrap(), 0.6, epsilon = 1e-15);
        assert_relative_eq!(synthetic.q(1, 1).unwrap(), 0.8, epsilon = 1e-15);
    }

    #[test]
    fn binomial_reference_values() {
        assert_relative_eq!(binomial_likelihood(1, 0, 0.5).unwrap(), 0.5, epsilon = 1e-15);
        // C(50, 25) / 2^50
        assert_relative_eq!(
            binomial_likelihood(50, 25, 0.5).unwrap(),
            0.11227517265921705,
            epsilon = 1e-12
        );
        assert_eq!(binomial_likelihood(10, 3, 0.0).unwrap(), 0.0);
        assert_eq!(binomial_likelihood(10, 0, 0.0).unwrap(), 1.0);
        assert_eq!(binomial_likelihood(10, 10, 1.0).unwrap(), 1.0);
        assert!(matches!(
            binomial_likelihood(5, 6, 0.5),
            Err(Error::CountExceedsTrials { k: 6, n: 5 })
        ));
    }

    #[test]
    fn normal_parameter_values() {
        let (mu, sigma) = normal_params(0.5, 50).unwrap();
        assert_relative_eq!(mu, 0.5, epsilon = 1e-15);
        assert_relative_eq!(sigma, 0.07071067811865475, epsilon = 1e-15);

        let (_, s0) = normal_params(0.0, 50).unwrap();
        assert_eq!(s0, 0.0);

        let (_, s_n) = normal_params(0.3, 100).unwrap();
        let (_, s_4n) = normal_params(0.3, 400).unwrap();
        assert_relative_eq!(s_n / s_4n, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn normal_tail_tracks_binomial_tail() {
        // The tail masses beyond the decision thresholds agree within 0.01
        // for n >= 50 and p in [0.1, 0.9] (continuity-corrected strict
        // tails, the form the acceptance test leans on).
        for &n in &[50u64, 100, 200] {
            for i in 1..=9 {
                let p = i as f64 / 10.0;
                let (mu, sigma) = normal_params(p, n).unwrap();
                let sigma_counts = sigma * n as f64;
                let mean_counts = mu * n as f64;
                for z in [2.0, 3.0] {
                    // Upper tail: P(K > k) vs 1 - Phi(k + 1/2).
                    let k_up = (mean_counts + z * sigma_counts).ceil().min(n as f64) as u64;
                    let exact_up = 1.0 - binomial_cdf(n, k_up, p).unwrap();
                    let approx_up =
                        1.0 - normal_cdf(k_up as f64 + 0.5, mean_counts, sigma_counts);
                    assert!(
                        (exact_up - approx_up).abs() < 0.01,
                        "upper n={n} p={p} z={z}: {exact_up} vs {approx_up}"
                    );
                    // Lower tail: P(K < k) vs Phi(k - 1/2).
                    let k_lo = (mean_counts - z * sigma_counts).floor().max(0.0) as u64;
                    let exact_lo = if k_lo == 0 {
                        0.0
                    } else {
                        binomial_cdf(n, k_lo - 1, p).unwrap()
                    };
                    let approx_lo = normal_cdf(k_lo as f64 - 0.5, mean_counts, sigma_counts);
                    assert!(
                        (exact_lo - approx_lo).abs() < 0.01,
                        "lower n={n} p={p} z={z}: {exact_lo} vs {approx_lo}"
                    );
                }
            }
        }
    }

    fn tables_at(p_d: f64) -> (ConditionalProbs, ConditionalProbs) {
        let params = NoiseParams::depolarizing_only(p_d);
        (
            closed_form_cond_probs(&params, FRAC_PI_4, 0.0).unwrap(),
            cheating_cond_probs(&params, FRAC_PI_4, 0.0).unwrap(),
        )
    }

    #[test]
    fn tally_at_honest_means_is_accepted() {
        let (honest, cheat) = tables_at(0.1);
        // n(b) = 50 each, counts at the honest expectation.
        let t = Tally::from_counts([[47, 25], [3, 25]]);
        let v = accept_test(&t, 0, &honest, &cheat, &Thresholds::default(), None);
        assert_eq!(v.decision, Decision::Accept(0));
        assert!(v.secure);
        assert_relative_eq!(v.rows[1].z_honest.unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn empty_row_is_inconclusive_reject() {
        let (honest, cheat) = tables_at(0.1);
        let t = Tally::from_counts([[47, 0], [3, 0]]);
        let v = accept_test(&t, 0, &honest, &cheat, &Thresholds::default(), None);
        assert_eq!(v.decision, Decision::Reject);
        assert!(v.inconclusive);
    }

    #[test]
    fn low_yield_rejects_when_configured() {
        let (honest, cheat) = tables_at(0.1);
        let t = Tally::from_counts([[47, 25], [3, 25]]);
        let th = Thresholds {
            min_yield_fraction: 0.5,
            ..Thresholds::default()
        };
        let v = accept_test(&t, 0, &honest, &cheat, &th, Some(1000.0));
        assert_eq!(v.decision, Decision::Reject);
        assert!(v.low_yield);
        let v = accept_test(&t, 0, &honest, &cheat, &th, Some(150.0));
        assert_eq!(v.decision, Decision::Accept(0));
    }

    #[test]
    fn biased_cross_row_is_rejected() {
        let (honest, cheat) = tables_at(0.1);
        // Cross row at the discrimination-attack mean.
        let t = Tally::from_counts([[47, 9], [3, 41]]);
        let v = accept_test(&t, 0, &honest, &cheat, &Thresholds::default(), None);
        assert_eq!(v.decision, Decision::Reject);
        assert!(v.rows[1].alpha_pass == Some(false));
    }

    #[test]
    fn table_one_thresholds() {
        let rows = [
            (2.0, 2.0, 0.26),
            (3.0, 1.0, 0.23),
            (3.0, 2.0, 0.09),
            (2.0, 1.0, 0.42),
        ];
        for (ka, kb, expect) in rows {
            let got = solve_pd_star(ka, kb, 50, FRAC_PI_4).unwrap().unwrap();
            assert!(
                (got - expect).abs() <= 0.02,
                "({ka}, {kb}): got {got}, expected {expect}"
            );
        }
        // Tightening beta weakly decreases the threshold.
        let loose = solve_pd_star(2.0, 1.0, 50, FRAC_PI_4).unwrap().unwrap();
        let tight = solve_pd_star(2.0, 3.0, 50, FRAC_PI_4).unwrap().unwrap();
        assert!(tight <= loose);
        // Absurd demands leave no feasible noise level.
        assert_eq!(solve_pd_star(40.0, 40.0, 50, FRAC_PI_4).unwrap(), None);
    }

    #[test]
    fn table_two_thresholds() {
        let rows = [
            (2.0, 2.0, 0.40),
            (3.0, 1.0, 0.35),
            (3.0, 2.0, 0.49),
            (2.0, 1.0, 0.26),
        ];
        for (ka, kb, expect) in rows {
            let got = solve_pd_delta_star(0.15, ka, kb, 50, FRAC_PI_4)
                .unwrap()
                .unwrap();
            assert!(
                (got - expect).abs() <= 0.02,
                "({ka}, {kb}): got {got}, expected {expect}"
            );
        }
        assert_eq!(
            solve_pd_delta_star(0.15, 40.0, 40.0, 50, FRAC_PI_4).unwrap(),
            None
        );
    }

    #[test]
    fn larger_samples_tolerate_more_noise() {
        let at_50 = solve_pd_star(2.0, 2.0, 50, FRAC_PI_4).unwrap().unwrap();
        let at_200 = solve_pd_star(2.0, 2.0, 200, FRAC_PI_4).unwrap().unwrap();
        assert!(at_200 > at_50);
    }
}
