//! The optical noise model: depolarizing, bit-flip and phase-flip channels,
//! the transmission unitary, the staged preparation/transmission/measurement
//! pipeline, and the combined conditional-probability table.
//!
//! The table `p_c(r|b)`, the probability of outcome `r` when measuring the
//! observable `C_c` on a qubit prepared as `|b>`, is computed two ways:
//!
//! - [`closed_form_cond_probs`] evaluates trigonometric expressions in the
//!   channel coefficients, and
//! - [`numeric_cond_probs`] builds each staged channel as a Kraus pipeline
//!   and takes Born-rule traces, with no closed-form shortcuts.
//!
//! The two routes agree to better than 1e-10 over the whole parameter
//! space; the pipeline serves as the independent oracle for the formulas.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::quantum::{
    density_from_pure, identity, measure_probability, pauli_x, pauli_y, pauli_z, CMat2,
    KrausChannel, MeasurementBasis, PureState,
};
use crate::{check_range, Bit, Error, Result};

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `sigma_x` of basis `B_b`: flips the two basis vectors into each other.
pub fn flip_x(basis: Bit, theta: f64, phi: f64) -> CMat2 {
    if basis == 0 {
        pauli_x()
    } else {
        let one = PureState::state_one(theta, phi).column();
        let perp = PureState::state_one_perp(theta, phi).column();
        one * perp.adjoint() + perp * one.adjoint()
    }
}

/// `sigma_z` of basis `B_b`: flips the phase of the second basis vector.
pub fn flip_z(basis: Bit, theta: f64, phi: f64) -> CMat2 {
    if basis == 0 {
        pauli_z()
    } else {
        let one = PureState::state_one(theta, phi).column();
        let perp = PureState::state_one_perp(theta, phi).column();
        one * one.adjoint() - perp * perp.adjoint()
    }
}

/// White noise: with probability `1 - p` the state passes intact, with
/// probability `p` it becomes totally mixed. Kraus weights are
/// `sqrt(1 - 3p/4) I` and `sqrt(p/4) sigma_i`.
pub fn depolarizing(p: f64) -> Result<KrausChannel> {
    check_range("p_d", p, 0.0, 1.0)?;
    KrausChannel::new(vec![
        identity() * re((1.0 - 0.75 * p).sqrt()),
        pauli_x() * re((p / 4.0).sqrt()),
        pauli_y() * re((p / 4.0).sqrt()),
        pauli_z() * re((p / 4.0).sqrt()),
    ])
}

fn two_outcome_mix(p: f64, op: CMat2) -> KrausChannel {
    KrausChannel::new(vec![identity() * re((1.0 - p).sqrt()), op * re(p.sqrt())])
        .expect("mixture of unitaries is complete")
}

/// Bit-flip channel in basis `B_basis`, physical domain `p` in `[0, 1/2]`.
pub fn bit_flip(basis: Bit, p: f64, theta: f64, phi: f64) -> Result<KrausChannel> {
    check_range("p_b", p, 0.0, 0.5)?;
    Ok(two_outcome_mix(p, flip_x(basis, theta, phi)))
}

/// Bit-flip channel on the extended domain `p` in `[0, 1]`, used to plot
/// the symmetric flip surfaces; `p = 1` is a deterministic flip.
pub fn bit_flip_extended(basis: Bit, p: f64, theta: f64, phi: f64) -> Result<KrausChannel> {
    check_range("p_b", p, 0.0, 1.0)?;
    Ok(two_outcome_mix(p, flip_x(basis, theta, phi)))
}

/// Phase-flip channel in basis `B_basis`, physical domain `p` in `[0, 1/2]`.
pub fn phase_flip(basis: Bit, p: f64, theta: f64, phi: f64) -> Result<KrausChannel> {
    check_range("p_p", p, 0.0, 0.5)?;
    Ok(two_outcome_mix(p, flip_z(basis, theta, phi)))
}

/// Phase-flip channel on the extended domain `p` in `[0, 1]`.
pub fn phase_flip_extended(basis: Bit, p: f64, theta: f64, phi: f64) -> Result<KrausChannel> {
    check_range("p_p", p, 0.0, 1.0)?;
    Ok(two_outcome_mix(p, flip_z(basis, theta, phi)))
}

/// Systematic rotation of the polarization axis: the single-Kraus channel
/// `rho -> U rho U^dag` with, in `B0` coordinates,
///
/// ```text
/// U = [ e^{i lambda} cos(alpha)   -e^{-i mu} sin(alpha) ]
///     [ e^{i mu}     sin(alpha)    e^{-i lambda} cos(alpha) ]
/// ```
///
/// `sin^2(alpha)` is the matched-basis error rate in `B0`.
pub fn unitary_channel(u_alpha: f64, u_lambda: f64, u_mu: f64) -> Result<KrausChannel> {
    check_range("u_alpha", u_alpha, 0.0, std::f64::consts::FRAC_PI_2)?;
    check_range("u_lambda", u_lambda, 0.0, std::f64::consts::TAU)?;
    check_range("u_mu", u_mu, 0.0, std::f64::consts::TAU)?;
    let (ca, sa) = (u_alpha.cos(), u_alpha.sin());
    let u = CMat2::new(
        Complex64::from_polar(ca, u_lambda),
        -Complex64::from_polar(sa, -u_mu),
        Complex64::from_polar(sa, u_mu),
        Complex64::from_polar(ca, -u_lambda),
    );
    KrausChannel::new(vec![u])
}

/// All channel coefficients of the staged noise model: per-stage white
/// noise, per-stage basis-dependent flips, and the transmission unitary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    /// White noise in the preparation apparatus.
    pub p_d_prep: f64,
    /// White noise during transmission.
    pub p_d_trans: f64,
    /// White noise in the measurement apparatus.
    pub p_d_meas: f64,
    /// Bit-flip probability at preparation (in the prepared basis).
    pub p_b_prep: f64,
    /// Bit-flip probability at measurement (in the measured basis).
    pub p_b_meas: f64,
    /// Phase-flip probability at preparation.
    pub p_p_prep: f64,
    /// Phase-flip probability at measurement.
    pub p_p_meas: f64,
    /// Rotation angle of the transmission unitary, in `[0, pi/2]`.
    pub u_alpha: f64,
    /// Diagonal phase of the transmission unitary, in `[0, 2pi)`.
    pub u_lambda: f64,
    /// Off-diagonal phase of the transmission unitary, in `[0, 2pi)`.
    pub u_mu: f64,
}

impl Default for NoiseParams {
    fn default() -> Self {
        Self::zero()
    }
}

impl NoiseParams {
    /// The noiseless configuration.
    pub fn zero() -> Self {
        Self {
            p_d_prep: 0.0,
            p_d_trans: 0.0,
            p_d_meas: 0.0,
            p_b_prep: 0.0,
            p_b_meas: 0.0,
            p_p_prep: 0.0,
            p_p_meas: 0.0,
            u_alpha: 0.0,
            u_lambda: 0.0,
            u_mu: 0.0,
        }
    }

    /// White noise only, attributed to the transmission stage.
    pub fn depolarizing_only(p_d: f64) -> Self {
        Self {
            p_d_trans: p_d,
            ..Self::zero()
        }
    }

    /// Validates all coefficients on the physical domain (flips in
    /// `[0, 1/2]`).
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("p_b_prep", self.p_b_prep), ("p_b_meas", self.p_b_meas)] {
            check_range(name, v, 0.0, 0.5)?;
        }
        for (name, v) in [("p_p_prep", self.p_p_prep), ("p_p_meas", self.p_p_meas)] {
            check_range(name, v, 0.0, 0.5)?;
        }
        self.validate_common()
    }

    /// Like [`validate`](Self::validate) but admits the extended flip
    /// domain `[0, 1]`, which the symmetric sweep plots use.
    pub fn validate_extended(&self) -> Result<()> {
        for (name, v) in [
            ("p_b_prep", self.p_b_prep),
            ("p_b_meas", self.p_b_meas),
            ("p_p_prep", self.p_p_prep),
            ("p_p_meas", self.p_p_meas),
        ] {
            check_range(name, v, 0.0, 1.0)?;
        }
        self.validate_common()
    }

    fn validate_common(&self) -> Result<()> {
        for (name, v) in [
            ("p_d_prep", self.p_d_prep),
            ("p_d_trans", self.p_d_trans),
            ("p_d_meas", self.p_d_meas),
        ] {
            check_range(name, v, 0.0, 1.0)?;
        }
        check_range("p_d total", self.total_depolarizing(), 0.0, 1.0)?;
        check_range("u_alpha", self.u_alpha, 0.0, std::f64::consts::FRAC_PI_2)?;
        check_range("u_lambda", self.u_lambda, 0.0, std::f64::consts::TAU)?;
        check_range("u_mu", self.u_mu, 0.0, std::f64::consts::TAU)?;
        Ok(())
    }

    /// Total white-noise coefficient `p_d = p_d^p + p_d^t + p_d^m`.
    ///
    /// The three stage channels are merged additively. The exact
    /// composition of depolarizing channels is multiplicative in the
    /// survival factors, `1 - p = (1-p^p)(1-p^t)(1-p^m)`, which the
    /// additive form matches to first order; see
    /// [`composed_depolarizing`](Self::composed_depolarizing) for the
    /// exact alternative. The additive form is the model default.
    pub fn total_depolarizing(&self) -> f64 {
        self.p_d_prep + self.p_d_trans + self.p_d_meas
    }

    /// Exact three-stage composition `1 - (1-p^p)(1-p^t)(1-p^m)`, offered
    /// for comparison against the additive default.
    pub fn composed_depolarizing(&self) -> f64 {
        1.0 - (1.0 - self.p_d_prep) * (1.0 - self.p_d_trans) * (1.0 - self.p_d_meas)
    }

    /// Joint depolarizing/bit-flip coefficient
    /// `b = 1 - (1 - 2 p_b^m)(1 - 2 p_b^p)`.
    pub fn joint_b(&self) -> f64 {
        1.0 - (1.0 - 2.0 * self.p_b_meas) * (1.0 - 2.0 * self.p_b_prep)
    }

    /// Returns a copy with `delta` more white noise in the transmission
    /// stage; fails if the total would exceed 1.
    pub fn with_added_depolarizing(&self, delta: f64) -> Result<Self> {
        check_range(
            "delta_p_d",
            delta,
            0.0,
            1.0 - self.total_depolarizing() + 1e-12,
        )?;
        Ok(Self {
            p_d_trans: self.p_d_trans + delta,
            ..*self
        })
    }
}

/// The conditional-probability table `p_c(r|b)` for `c, r, b` in `{0, 1}`:
/// the protocol's statistical fingerprint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionalProbs {
    /// Indexed as `table[c][r][b]`.
    table: [[[f64; 2]; 2]; 2],
}

impl ConditionalProbs {
    /// Validates that every entry is a probability and that, for every
    /// `(c, b)`, the two outcomes sum to 1.
    pub fn from_table(table: [[[f64; 2]; 2]; 2]) -> Result<Self> {
        for c in 0..2 {
            for b in 0..2 {
                let row = [table[c][0][b], table[c][1][b]];
                if row.iter().any(|p| !(0.0..=1.0 + 1e-12).contains(p)) {
                    return Err(Error::NotADistribution(row.to_vec()));
                }
                if (row[0] + row[1] - 1.0).abs() > 1e-12 {
                    return Err(Error::NotADistribution(row.to_vec()));
                }
            }
        }
        Ok(Self { table })
    }

    /// `p_c(r|b)`.
    pub fn prob(&self, c: Bit, r: Bit, b: Bit) -> f64 {
        self.table[c as usize][r as usize][b as usize]
    }

    /// The outcome distribution `p_c(*|b)` as `[p(0|b), p(1|b)]`.
    pub fn row(&self, c: Bit, b: Bit) -> [f64; 2] {
        [self.prob(c, 0, b), self.prob(c, 1, b)]
    }

    /// The noiseless table: `p_0(0|0) = 1`, `p_0(0|1) = cos^2(theta)`, and
    /// the label-exchanged entries for `C_1`.
    pub fn ideal(theta: f64) -> Self {
        let c2 = theta.cos().powi(2);
        let s2 = theta.sin().powi(2);
        Self {
            table: [
                [[1.0, c2], [0.0, s2]],
                [[s2, 0.0], [c2, 1.0]],
            ],
        }
    }

    /// All rows uniform; the fully randomized limit.
    pub fn uniform() -> Self {
        Self {
            table: [[[0.5; 2]; 2]; 2],
        }
    }

    /// A table with identical rows for both measurement labels, as
    /// produced by a party that measures one fixed observable regardless
    /// of the claimed commitment.
    pub fn from_single_observable(rows: [[f64; 2]; 2]) -> Result<Self> {
        // rows[b] = [p(0|b), p(1|b)]
        let t = [
            [[rows[0][0], rows[1][0]], [rows[0][1], rows[1][1]]],
            [[rows[0][0], rows[1][0]], [rows[0][1], rows[1][1]]],
        ];
        Self::from_table(t)
    }

    /// The table with all of `c`, `r`, `b` relabeled `0 <-> 1`.
    pub fn label_exchanged(&self) -> Self {
        let mut t = [[[0.0; 2]; 2]; 2];
        for c in 0..2 {
            for r in 0..2 {
                for b in 0..2 {
                    t[c][r][b] = self.table[1 - c][1 - r][1 - b];
                }
            }
        }
        Self { table: t }
    }

    /// Entrywise convex mixture `nu * self + (1 - nu) * other`.
    pub fn mix(&self, other: &Self, nu: f64) -> Result<Self> {
        check_range("nu", nu, 0.0, 1.0)?;
        let mut t = [[[0.0; 2]; 2]; 2];
        for c in 0..2 {
            for r in 0..2 {
                for b in 0..2 {
                    t[c][r][b] = nu * self.table[c][r][b] + (1.0 - nu) * other.table[c][r][b];
                }
            }
        }
        Self::from_table(t)
    }
}

/// The staged channel `E_cb` seen by a qubit prepared as `|b>` and measured
/// with `C_c`: preparation flips in `B_b`, the transmission unitary, the
/// merged depolarizing channel, then measurement flips in `B_c`.
pub fn pipeline(c: Bit, b: Bit, params: &NoiseParams, theta: f64, phi: f64) -> Result<KrausChannel> {
    params.validate_extended()?;
    let stages = [
        phase_flip_extended(b, params.p_p_prep, theta, phi)?,
        bit_flip_extended(b, params.p_b_prep, theta, phi)?,
        unitary_channel(params.u_alpha, params.u_lambda, params.u_mu)?,
        depolarizing(params.total_depolarizing())?,
        phase_flip_extended(c, params.p_p_meas, theta, phi)?,
        bit_flip_extended(c, params.p_b_meas, theta, phi)?,
    ];
    Ok(stages
        .into_iter()
        .reduce(|before, after| KrausChannel::compose(&after, &before))
        .expect("non-empty stage list"))
}

/// Closed-form conditional probabilities for the combined noise model.
///
/// With `f = (1 - p_d)(1 - 2 p_b^m)(1 - 2 p_b^p)` the entries are
/// `p_c(r|b) = (1 +- f u_cb) / 2`, where `u_cb` is the overlap between the
/// rotated preparation axis and the measured axis:
///
/// ```text
/// u_00 = cos 2a
/// u_01 = cos 2a cos 2t - sin 2a sin 2t cos(phi - lambda - mu)
/// u_10 = cos 2a cos 2t + sin 2a sin 2t cos(phi + lambda - mu)
/// u_11 = 2 (A^2 + B^2) - 1,
///        A = cos a cos lambda
///        B = cos a sin lambda cos 2t - sin a sin 2t sin(phi - mu)
/// ```
///
/// (`a` the unitary rotation angle, `t` the state angle). Phase flips drop
/// out entirely: at preparation they act on basis-diagonal states, at
/// measurement they commute with the measured projectors. With the unitary
/// switched off (`a = 0`, `lambda = 0`) the `C_1` rows reduce to the
/// `0 <-> 1` label exchange of the `C_0` rows.
pub fn closed_form_cond_probs(params: &NoiseParams, theta: f64, phi: f64) -> Result<ConditionalProbs> {
    params.validate_extended()?;
    check_range("theta", theta, 0.0, std::f64::consts::FRAC_PI_2)?;

    let f = (1.0 - params.total_depolarizing())
        * (1.0 - 2.0 * params.p_b_meas)
        * (1.0 - 2.0 * params.p_b_prep);
    let (a, l, m) = (params.u_alpha, params.u_lambda, params.u_mu);
    let (c2a, s2a) = ((2.0 * a).cos(), (2.0 * a).sin());
    let (c2t, s2t) = ((2.0 * theta).cos(), (2.0 * theta).sin());

    let u00 = c2a;
    let u01 = c2a * c2t - s2a * s2t * (phi - l - m).cos();
    let u10 = c2a * c2t + s2a * s2t * (phi + l - m).cos();
    let big_a = a.cos() * l.cos();
    let big_b = a.cos() * l.sin() * c2t - a.sin() * s2t * (phi - m).sin();
    let u11 = 2.0 * (big_a * big_a + big_b * big_b) - 1.0;

    let half = |u: f64| ((1.0 + f * u) / 2.0).clamp(0.0, 1.0);
    let p000 = half(u00);
    let p001 = half(u01);
    let p111 = half(u11);
    let p110 = half(u10);

    ConditionalProbs::from_table([
        [[p000, p001], [1.0 - p000, 1.0 - p001]],
        [[1.0 - p110, 1.0 - p111], [p110, p111]],
    ])
}

/// Oracle route for the same table: build each `E_cb` with [`pipeline`],
/// apply it to `|b><b|`, and take Born-rule traces under `C_c`.
pub fn numeric_cond_probs(params: &NoiseParams, theta: f64, phi: f64) -> Result<ConditionalProbs> {
    check_range("theta", theta, 0.0, std::f64::consts::FRAC_PI_2)?;
    let mut table = [[[0.0; 2]; 2]; 2];
    for c in 0..2u8 {
        let basis = MeasurementBasis::observable(c, theta, phi);
        for b in 0..2u8 {
            let prepared = if b == 0 {
                PureState::ket_zero()
            } else {
                PureState::state_one(theta, phi)
            };
            let rho = pipeline(c, b, params, theta, phi)?.apply(&density_from_pure(&prepared));
            let p0 = measure_probability(&rho, &basis, 0);
            table[c as usize][0][b as usize] = p0;
            table[c as usize][1][b as usize] = 1.0 - p0;
        }
    }
    ConditionalProbs::from_table(table)
}
