//! Exact single-qubit linear algebra: pure states, density matrices, Kraus
//! channels, Born-rule probabilities and sampling.
//!
//! The computational basis `B0 = {|0>, |0_perp>}` is the protocol's first
//! preparation basis. The second basis `B1 = {|1>, |1_perp>}` is tilted by
//! the angle `theta` with a relative phase `phi`:
//!
//! ```text
//! |1>      = cos(theta) |0> + e^{i phi} sin(theta) |0_perp>
//! |1_perp> = sin(theta) |0> - e^{i phi} cos(theta) |0_perp>
//! ```
//!
//! so that `<0|1> = cos(theta)`. All operations are pure functions over
//! immutable values; RNG state is caller-owned.

use nalgebra::Matrix2;
use num_complex::Complex64;
use rand::Rng;

use crate::{Bit, Error, Result};

/// 2x2 complex matrix, the workhorse of the whole crate.
pub type CMat2 = Matrix2<Complex64>;

pub(crate) const NORM_TOL: f64 = 1e-12;
pub(crate) const HERMITIAN_TOL: f64 = 1e-12;
pub(crate) const TRACE_TOL: f64 = 1e-12;
pub(crate) const PSD_TOL: f64 = 1e-10;
pub(crate) const KRAUS_TOL: f64 = 1e-10;
pub(crate) const PROJECTOR_TOL: f64 = 1e-10;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Identity matrix.
pub fn identity() -> CMat2 {
    CMat2::identity()
}

/// Pauli X in the `B0` basis.
pub fn pauli_x() -> CMat2 {
    CMat2::new(re(0.0), re(1.0), re(1.0), re(0.0))
}

/// Pauli Y in the `B0` basis.
pub fn pauli_y() -> CMat2 {
    CMat2::new(
        re(0.0),
        Complex64::new(0.0, -1.0),
        Complex64::new(0.0, 1.0),
        re(0.0),
    )
}

/// Pauli Z in the `B0` basis.
pub fn pauli_z() -> CMat2 {
    CMat2::new(re(1.0), re(0.0), re(0.0), re(-1.0))
}

/// A normalized single-qubit pure state, stored as amplitudes on the `B0`
/// basis vectors `|0>` and `|0_perp>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureState {
    amp0: Complex64,
    amp1: Complex64,
}

impl PureState {
    /// Builds a state from its amplitudes, rejecting non-normalized input.
    pub fn new(amp0: Complex64, amp1: Complex64) -> Result<Self> {
        let norm_sq = amp0.norm_sqr() + amp1.norm_sqr();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm_sq));
        }
        Ok(Self { amp0, amp1 })
    }

    /// `|0>`, the first vector of `B0`.
    pub fn ket_zero() -> Self {
        Self {
            amp0: re(1.0),
            amp1: re(0.0),
        }
    }

    /// `|0_perp>`, the second vector of `B0`.
    pub fn ket_zero_perp() -> Self {
        Self {
            amp0: re(0.0),
            amp1: re(1.0),
        }
    }

    /// `|1> = cos(theta)|0> + e^{i phi} sin(theta)|0_perp>`.
    pub fn state_one(theta: f64, phi: f64) -> Self {
        Self {
            amp0: re(theta.cos()),
            amp1: Complex64::from_polar(theta.sin(), phi),
        }
    }

    /// `|1_perp> = sin(theta)|0> - e^{i phi} cos(theta)|0_perp>`.
    pub fn state_one_perp(theta: f64, phi: f64) -> Self {
        Self {
            amp0: re(theta.sin()),
            amp1: -Complex64::from_polar(theta.cos(), phi),
        }
    }

    pub fn amplitudes(&self) -> (Complex64, Complex64) {
        (self.amp0, self.amp1)
    }

    /// Column-vector view in `B0` coordinates.
    pub fn column(&self) -> nalgebra::Vector2<Complex64> {
        nalgebra::Vector2::new(self.amp0, self.amp1)
    }
}

/// A 2x2 complex Hermitian, unit-trace, positive-semidefinite matrix: the
/// state of one qubit, pure or mixed.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: CMat2,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positive semidefiniteness.
    pub fn new(entries: CMat2) -> Result<Self> {
        let asym = (entries - entries.adjoint()).norm();
        if asym > 2.0 * HERMITIAN_TOL {
            return Err(Error::NotHermitian(asym));
        }
        let trace = entries.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::BadTrace(trace.re));
        }
        let (lo, _) = hermitian_eigenvalues(&entries);
        if lo < -PSD_TOL {
            return Err(Error::NotPositiveSemidefinite(lo));
        }
        Ok(Self { entries })
    }

    /// `I/2`, the totally mixed state.
    pub fn maximally_mixed() -> Self {
        Self {
            entries: identity() * re(0.5),
        }
    }

    pub fn matrix(&self) -> &CMat2 {
        &self.entries
    }

    /// Eigenvalues in ascending order, from the closed-form quadratic.
    pub fn eigenvalues(&self) -> (f64, f64) {
        hermitian_eigenvalues(&self.entries)
    }
}

/// Closed-form eigenvalues of a Hermitian 2x2 matrix (ascending).
fn hermitian_eigenvalues(m: &CMat2) -> (f64, f64) {
    let t = m.trace().re;
    let det = (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).re;
    let disc = (t * t - 4.0 * det).max(0.0).sqrt();
    ((t - disc) / 2.0, (t + disc) / 2.0)
}

/// Rank-1 projector `|psi><psi|`.
pub fn density_from_pure(psi: &PureState) -> DensityMatrix {
    let v = psi.column();
    DensityMatrix {
        entries: v * v.adjoint(),
    }
}

/// A quantum channel in operator-sum form: `rho -> sum_i K_i rho K_i^dag`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    operators: Vec<CMat2>,
}

impl KrausChannel {
    /// Builds a channel, rejecting Kraus sets that do not satisfy the
    /// completeness relation `sum_i K_i^dag K_i = I`.
    pub fn new(operators: Vec<CMat2>) -> Result<Self> {
        let sum: CMat2 = operators.iter().map(|k| k.adjoint() * k).sum();
        let deviation = (sum - identity()).norm();
        if deviation > KRAUS_TOL {
            return Err(Error::IncompleteKraus(deviation));
        }
        Ok(Self { operators })
    }

    pub fn identity_channel() -> Self {
        Self {
            operators: vec![identity()],
        }
    }

    pub fn operators(&self) -> &[CMat2] {
        &self.operators
    }

    /// Applies the channel to a state.
    pub fn apply(&self, rho: &DensityMatrix) -> DensityMatrix {
        let m = rho.matrix();
        let entries: CMat2 = self.operators.iter().map(|k| k * m * k.adjoint()).sum();
        // Trace and Hermiticity are preserved analytically; renormalize the
        // rounding dust so long pipelines stay within the type invariants.
        let entries = (entries + entries.adjoint()) * re(0.5);
        let tr = entries.trace().re;
        DensityMatrix {
            entries: entries * re(1.0 / tr),
        }
    }

    /// The composition `after . before` (apply `before` first), with Kraus
    /// operators given by all pairwise products.
    pub fn compose(after: &Self, before: &Self) -> Self {
        let operators = after
            .operators
            .iter()
            .flat_map(|a| before.operators.iter().map(move |b| a * b))
            .collect();
        Self { operators }
    }
}

/// Applies a channel to a density matrix.
pub fn apply_channel(channel: &KrausChannel, rho: &DensityMatrix) -> DensityMatrix {
    channel.apply(rho)
}

/// A two-outcome projective measurement. `projector0` corresponds to
/// outcome `0`, `projector1` to outcome `1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBasis {
    projector0: CMat2,
    projector1: CMat2,
}

impl MeasurementBasis {
    /// Builds the measurement whose outcome `o` projects onto `vec_o`.
    /// The two vectors must be orthonormal.
    pub fn from_vectors(vec0: &PureState, vec1: &PureState) -> Result<Self> {
        let overlap = (vec0.column().adjoint() * vec1.column())[(0, 0)];
        if overlap.norm() > PROJECTOR_TOL {
            return Err(Error::NotOrthonormal);
        }
        let v0 = vec0.column();
        let v1 = vec1.column();
        Ok(Self {
            projector0: v0 * v0.adjoint(),
            projector1: v1 * v1.adjoint(),
        })
    }

    /// The commitment-0 observable: outcome `0` on `|0>`, outcome `1` on
    /// `|0_perp>`.
    pub fn observable_c0() -> Self {
        Self::from_vectors(&PureState::ket_zero(), &PureState::ket_zero_perp())
            .expect("B0 is orthonormal")
    }

    /// The commitment-1 observable: outcome `1` on `|1>`, outcome `0` on
    /// `|1_perp>`.
    pub fn observable_c1(theta: f64, phi: f64) -> Self {
        Self::from_vectors(
            &PureState::state_one_perp(theta, phi),
            &PureState::state_one(theta, phi),
        )
        .expect("B1 is orthonormal")
    }

    /// The observable committing to bit `c`.
    pub fn observable(c: Bit, theta: f64, phi: f64) -> Self {
        if c == 0 {
            Self::observable_c0()
        } else {
            Self::observable_c1(theta, phi)
        }
    }

    pub fn projector(&self, outcome: Bit) -> &CMat2 {
        if outcome == 0 {
            &self.projector0
        } else {
            &self.projector1
        }
    }
}

/// Born-rule probability `Tr(P_outcome rho)`, clamped to `[0, 1]`.
pub fn measure_probability(rho: &DensityMatrix, basis: &MeasurementBasis, outcome: Bit) -> f64 {
    let p = (basis.projector(outcome) * rho.matrix()).trace().re;
    p.clamp(0.0, 1.0)
}

/// Samples one measurement outcome. Deterministic under a fixed seed.
pub fn born_sample<R: Rng + ?Sized>(
    rho: &DensityMatrix,
    basis: &MeasurementBasis,
    rng: &mut R,
) -> Bit {
    let p0 = measure_probability(rho, basis, 0);
    if rng.gen::<f64>() < p0 {
        0
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn basis_states_project_to_diagonal_densities() {
        let rho = density_from_pure(&PureState::ket_zero());
        assert_relative_eq!(rho.matrix()[(0, 0)].re, 1.0, epsilon = 1e-15);
        assert_relative_eq!(rho.matrix()[(1, 1)].re, 0.0, epsilon = 1e-15);

        // theta = pi/2 makes |1> orthogonal to |0>.
        let rho = density_from_pure(&PureState::state_one(FRAC_PI_2, 0.0));
        assert_relative_eq!(rho.matrix()[(0, 0)].re, 0.0, epsilon = 1e-15);
        assert_relative_eq!(rho.matrix()[(1, 1)].re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn state_one_at_pi_over_4_has_uniform_outer_product() {
        // Outer product by hand: all four entries are 1/2.
        let rho = density_from_pure(&PureState::state_one(FRAC_PI_4, 0.0));
        for i in 0..2 {
            for j in 0..2 {
                assert_relative_eq!(rho.matrix()[(i, j)].re, 0.5, epsilon = 1e-15);
                assert_relative_eq!(rho.matrix()[(i, j)].im, 0.0, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn non_normalized_state_rejected() {
        let err = PureState::new(re(0.9), re(0.9)).unwrap_err();
        assert!(matches!(err, Error::NotNormalized(_)));
    }

    #[test]
    fn measure_probabilities_match_overlaps() {
        let c0 = MeasurementBasis::observable_c0();
        let rho0 = density_from_pure(&PureState::ket_zero());
        assert_relative_eq!(measure_probability(&rho0, &c0, 0), 1.0, epsilon = 1e-15);

        // p_0(0|1) = cos^2(theta)
        let rho1 = density_from_pure(&PureState::state_one(FRAC_PI_4, 0.0));
        assert_relative_eq!(measure_probability(&rho1, &c0, 0), 0.5, epsilon = 1e-14);

        let mixed = DensityMatrix::maximally_mixed();
        let c1 = MeasurementBasis::observable_c1(0.7, 1.3);
        assert_relative_eq!(measure_probability(&mixed, &c1, 0), 0.5, epsilon = 1e-14);
        assert_relative_eq!(measure_probability(&mixed, &c1, 1), 0.5, epsilon = 1e-14);
    }

    #[test]
    fn observable_c1_labels_outcomes_by_state_one() {
        // C_1 assigns outcome 1 to |1> and outcome 0 to |1_perp>.
        let theta = 0.9;
        let phi = 0.4;
        let c1 = MeasurementBasis::observable_c1(theta, phi);
        let rho1 = density_from_pure(&PureState::state_one(theta, phi));
        assert_relative_eq!(measure_probability(&rho1, &c1, 1), 1.0, epsilon = 1e-14);
        let rho1p = density_from_pure(&PureState::state_one_perp(theta, phi));
        assert_relative_eq!(measure_probability(&rho1p, &c1, 0), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn born_sample_is_deterministic_under_seed() {
        let rho = DensityMatrix::maximally_mixed();
        let basis = MeasurementBasis::observable_c0();
        let draw = |seed: u64| {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            (0..64).map(|_| born_sample(&rho, &basis, &mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(draw(7), draw(7));
        assert_ne!(draw(7), draw(8));

        // A pure basis state always yields its own label.
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        let rho0 = density_from_pure(&PureState::ket_zero());
        assert!((0..32).all(|_| born_sample(&rho0, &basis, &mut rng) == 0));
    }

    #[test]
    fn born_sample_frequency_tracks_probability() {
        // Binomial 3-sigma bound at n = 1e5 draws on the maximally mixed state.
        let rho = DensityMatrix::maximally_mixed();
        let basis = MeasurementBasis::observable_c0();
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        let n = 100_000;
        let zeros = (0..n).filter(|_| born_sample(&rho, &basis, &mut rng) == 0).count();
        let freq = zeros as f64 / n as f64;
        assert!((freq - 0.5).abs() < 0.01, "freq = {freq}");
    }

    #[test]
    fn incomplete_kraus_set_rejected() {
        let err = KrausChannel::new(vec![pauli_x() * re(0.5)]).unwrap_err();
        assert!(matches!(err, Error::IncompleteKraus(_)));
    }

    #[test]
    fn identity_channel_preserves_states() {
        let ch = KrausChannel::identity_channel();
        let rho = density_from_pure(&PureState::state_one(0.6, 2.0));
        let out = ch.apply(&rho);
        assert!((out.matrix() - rho.matrix()).norm() < 1e-14);
    }

    fn arb_pure_state() -> impl Strategy<Value = PureState> {
        (0.0..FRAC_PI_2, 0.0..std::f64::consts::TAU, 0.0..std::f64::consts::TAU).prop_map(
            |(t, ph, global)| {
                let amp0 = Complex64::from_polar(t.cos(), global);
                let amp1 = Complex64::from_polar(t.sin(), global + ph);
                PureState::new(amp0, amp1).unwrap()
            },
        )
    }

    fn arb_channel() -> impl Strategy<Value = KrausChannel> {
        // Random mixtures of Pauli conjugations are always complete.
        (0.0..1.0f64, 0.0..1.0f64, 0.0..1.0f64).prop_map(|(a, b, c)| {
            let total = 1.0 + a + b + c;
            let ws = [1.0 / total, a / total, b / total, c / total];
            let ops = [identity(), pauli_x(), pauli_y(), pauli_z()];
            KrausChannel::new(
                ws.iter()
                    .zip(ops.iter())
                    .map(|(w, op)| op * re(w.sqrt()))
                    .collect(),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn channels_preserve_trace_and_hermiticity(
            psi in arb_pure_state(),
            ch in arb_channel(),
        ) {
            let out = ch.apply(&density_from_pure(&psi));
            let m = out.matrix();
            prop_assert!((m.trace().re - 1.0).abs() < 1e-12);
            prop_assert!((m - m.adjoint()).norm() < 1e-12);
            let (lo, _) = out.eigenvalues();
            prop_assert!(lo > -1e-10);
        }

        #[test]
        fn sequential_application_equals_composition(
            psi in arb_pure_state(),
            first in arb_channel(),
            second in arb_channel(),
        ) {
            let rho = density_from_pure(&psi);
            let sequential = second.apply(&first.apply(&rho));
            let composed = KrausChannel::compose(&second, &first).apply(&rho);
            prop_assert!((sequential.matrix() - composed.matrix()).norm() < 1e-10);
        }

        #[test]
        fn outcome_probabilities_sum_to_one(
            psi in arb_pure_state(),
            basis_theta in 0.01..1.5f64,
            basis_phi in 0.0..6.2f64,
        ) {
            let rho = density_from_pure(&psi);
            let basis = MeasurementBasis::observable_c1(basis_theta, basis_phi);
            let total = measure_probability(&rho, &basis, 0)
                + measure_probability(&rho, &basis, 1);
            prop_assert!((total - 1.0).abs() < 1e-12);
        }
    }
}
