//! Cheating-Alice strategies: the minimum-error discrimination measurement,
//! deliberate white-noise injection, delayed measurement through a noisy
//! quantum memory, bounded-memory mixtures, and the reduction of imperfect
//! non-demolition detection to a bounded-memory attack.

use serde::{Deserialize, Serialize};

use crate::channels::{
    bit_flip_extended, closed_form_cond_probs, depolarizing, phase_flip_extended,
    unitary_channel, ConditionalProbs, NoiseParams,
};
use crate::quantum::{density_from_pure, measure_probability, MeasurementBasis, PureState};
use crate::{check_range, Result};

/// Minimum achievable error probability when discriminating the two
/// equal-prior protocol states: `(1 - sin(theta)) / 2`.
pub fn helstrom_error(theta: f64) -> Result<f64> {
    check_range("theta", theta, 0.0, std::f64::consts::FRAC_PI_2)?;
    Ok((1.0 - theta.sin()) / 2.0)
}

/// The orthonormal measurement achieving the minimum discrimination error:
/// both vectors lie in the `|0>`, `|1>` plane and share their bisector.
/// Outcome `0` tags the vector on the `|0>` side.
///
/// At `theta = pi/4` this is the Breidbart basis, with success probability
/// `cos^2(pi/8)` per state.
pub fn discrimination_basis(theta: f64, phi: f64) -> Result<MeasurementBasis> {
    check_range("theta", theta, 0.0, std::f64::consts::FRAC_PI_2)?;
    // The protocol states sit at plane angles 0 and theta; the optimal
    // basis sits at theta/2 -+ pi/4.
    let xi0 = theta / 2.0 - std::f64::consts::FRAC_PI_4;
    let xi1 = theta / 2.0 + std::f64::consts::FRAC_PI_4;
    let vec_at = |xi: f64| {
        PureState::new(
            num_complex::Complex64::new(xi.cos(), 0.0),
            num_complex::Complex64::from_polar(xi.sin(), phi),
        )
        .expect("plane vectors are normalized")
    };
    MeasurementBasis::from_vectors(&vec_at(xi0), &vec_at(xi1))
}

/// Conditional outcome table for a party that measures the discrimination
/// basis on every qubit, through the same preparation and transmission
/// noise as the honest pipeline. The discrimination measurement itself is
/// noiseless; measurement-stage flips configured in `params` act as device
/// noise in `B0` just before the projection.
///
/// The same rows are reported for both commitment labels: a discriminating
/// party has only one outcome stream.
pub fn cheating_cond_probs(params: &NoiseParams, theta: f64, phi: f64) -> Result<ConditionalProbs> {
    params.validate_extended()?;
    check_range("theta", theta, 0.0, std::f64::consts::FRAC_PI_2)?;
    let basis = discrimination_basis(theta, phi)?;
    let mut rows = [[0.0; 2]; 2];
    for b in 0..2u8 {
        let prepared = if b == 0 {
            PureState::ket_zero()
        } else {
            PureState::state_one(theta, phi)
        };
        let mut rho = density_from_pure(&prepared);
        for stage in [
            phase_flip_extended(b, params.p_p_prep, theta, phi)?,
            bit_flip_extended(b, params.p_b_prep, theta, phi)?,
            unitary_channel(params.u_alpha, params.u_lambda, params.u_mu)?,
            depolarizing(params.total_depolarizing())?,
            phase_flip_extended(0, params.p_p_meas, theta, phi)?,
            bit_flip_extended(0, params.p_b_meas, theta, phi)?,
        ] {
            rho = stage.apply(&rho);
        }
        let p0 = measure_probability(&rho, &basis, 0);
        rows[b as usize] = [p0, 1.0 - p0];
    }
    ConditionalProbs::from_single_observable(rows)
}

/// The amount of extra white noise that minimizes the relative entropy
/// between honest statistics at channel noise `p_d` and the discrimination
/// attack: `(1 - 1/sqrt(2)) (1 - p_d)`.
pub fn optimal_added_noise(p_d: f64) -> Result<f64> {
    check_range("p_d", p_d, 0.0, 1.0)?;
    Ok((1.0 - std::f64::consts::FRAC_1_SQRT_2) * (1.0 - p_d))
}

/// Outcome table for a delayed honest-observable measurement: the stored
/// photons decohere further, so the table is the honest one with total
/// white noise `p_d + p_d_delta_t`.
pub fn memory_attack_probs(
    params: &NoiseParams,
    p_d_delta_t: f64,
    theta: f64,
    phi: f64,
) -> Result<ConditionalProbs> {
    let delayed = params.with_added_depolarizing(p_d_delta_t)?;
    closed_form_cond_probs(&delayed, theta, phi)
}

/// Entrywise mixture `nu * honest + (1 - nu) * cheat`: the statistics of a
/// party that stores a fraction `nu` of the photons and measures the rest
/// with the cheating observable.
pub fn bounded_memory_probs(
    nu: f64,
    honest: &ConditionalProbs,
    cheat: &ConditionalProbs,
) -> Result<ConditionalProbs> {
    honest.mix(cheat, nu)
}

/// A dishonest measurement strategy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum AttackModel {
    /// Immediate minimum-error discrimination on every photon.
    Breidbart,
    /// Discrimination with `delta_p_d` of extra white noise injected.
    AddedNoise { delta_p_d: f64 },
    /// Ideal non-demolition capture; every photon sits in a noisy memory
    /// accumulating `p_d_delta_t` before the postponed measurement.
    Memory { p_d_delta_t: f64 },
    /// A fraction `nu` of outcomes comes from stored photons (measured per
    /// `inner` at opening), the rest from immediate discrimination.
    BoundedMemory { nu: f64, inner: Box<AttackModel> },
    /// Non-demolition detection with efficiency `p_nd`; photons that fail
    /// to store are measured per `fallback` immediately.
    NonDemolition {
        p_nd: f64,
        fallback: Box<AttackModel>,
    },
}

impl AttackModel {
    /// Checks every parameter range, including nested models. `p_d` is the
    /// channel's own white-noise total, which bounds the noise an attacker
    /// can still add.
    pub fn validate(&self, p_d: f64) -> Result<()> {
        match self {
            AttackModel::Breidbart => Ok(()),
            AttackModel::AddedNoise { delta_p_d } => {
                check_range("delta_p_d", *delta_p_d, 0.0, 1.0 - p_d)
            }
            AttackModel::Memory { p_d_delta_t } => {
                check_range("p_d_delta_t", *p_d_delta_t, 0.0, 1.0 - p_d)
            }
            AttackModel::BoundedMemory { nu, inner } => {
                check_range("nu", *nu, 0.0, 1.0)?;
                inner.validate(p_d)
            }
            AttackModel::NonDemolition { p_nd, fallback } => {
                check_range("p_nd", *p_nd, 0.0, 1.0)?;
                fallback.validate(p_d)
            }
        }
    }
}

/// Rewrites a finite-efficiency non-demolition attack as the equivalent
/// bounded-memory attack: only the fraction `nu = p_nd` of outcomes comes
/// from stored photons, the rest from the immediate fallback measurement.
pub fn nondemolition_reduction(p_nd: f64, memory_model: AttackModel) -> Result<AttackModel> {
    check_range("p_nd", p_nd, 0.0, 1.0)?;
    Ok(AttackModel::BoundedMemory {
        nu: p_nd,
        inner: Box::new(memory_model),
    })
}
