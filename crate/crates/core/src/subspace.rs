//! Exact dynamics in the one-excitation subspace of two coupled bosonic
//! modes.
//!
//! A single photon shared between modes a and b lives in the two-dimensional
//! space spanned by {|1_a 0_b⟩, |0_a 1_b⟩}. Everything here is closed-form:
//! states are complex amplitude pairs, Hamiltonians are Bloch vectors, and
//! propagators come from the axis-angle rotation identity
//!
//! ```text
//! exp(-i H t) = cos(ωt/2)·I - i sin(ωt/2)·(n̂·σ⃗)   for H = (ω/2)(n̂·σ⃗)
//! ```
//!
//! with ħ = 1, times in seconds and rates in rad/s. Every closed form is
//! cross-checked against [`crate::linalg::matrix_exp_oracle`] in the tests.

use std::f64::consts::{PI, TAU};
use std::ops::Mul;

use nalgebra::{DMatrix, Matrix2, Vector2};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Construction-time tolerance for norms and unitarity.
pub const CONSTRUCTION_TOL: f64 = 1e-12;
/// Unitarity residual beyond which [`Propagator2::apply`] refuses to act.
pub const APPLY_UNITARITY_TOL: f64 = 1e-9;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// A normalized state α|1_a 0_b⟩ + β|0_a 1_b⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubspaceState {
    amp10: Complex64,
    amp01: Complex64,
}

impl SubspaceState {
    /// Builds a state from explicit amplitudes, rejecting norms off unity by
    /// more than [`CONSTRUCTION_TOL`].
    pub fn new(amp10: Complex64, amp01: Complex64) -> Result<Self> {
        let norm_sq = amp10.norm_sqr() + amp01.norm_sqr();
        let deviation = (norm_sq - 1.0).abs();
        if deviation > CONSTRUCTION_TOL {
            return Err(Error::NotNormalized(deviation));
        }
        Ok(Self { amp10, amp01 })
    }

    /// cos(θ₀/2)|1_a 0_b⟩ + e^{iφ₀} sin(θ₀/2)|0_a 1_b⟩, the Bloch-sphere
    /// parameterization of the initial state. Angles are reduced mod 2π.
    pub fn from_bloch_angles(theta0: f64, phi0: f64) -> Self {
        let theta = theta0.rem_euclid(TAU);
        let phi = phi0.rem_euclid(TAU);
        Self {
            amp10: Complex64::from((theta / 2.0).cos()),
            amp01: Complex64::from_polar((theta / 2.0).sin(), phi),
        }
    }

    /// |1_a 0_b⟩: the photon in mode a.
    pub fn photon_in_a() -> Self {
        Self {
            amp10: Complex64::ONE,
            amp01: Complex64::ZERO,
        }
    }

    /// |0_a 1_b⟩: the photon in mode b.
    pub fn photon_in_b() -> Self {
        Self {
            amp10: Complex64::ZERO,
            amp01: Complex64::ONE,
        }
    }

    /// (|1_a 0_b⟩ + |0_a 1_b⟩)/√2.
    pub fn bell() -> Self {
        Self::from_bloch_angles(PI / 2.0, 0.0)
    }

    pub fn amp10(&self) -> Complex64 {
        self.amp10
    }

    pub fn amp01(&self) -> Complex64 {
        self.amp01
    }

    pub fn as_vector(&self) -> Vector2<Complex64> {
        Vector2::new(self.amp10, self.amp01)
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amp10.conj() * other.amp10 + self.amp01.conj() * other.amp01
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp10.norm_sqr() + self.amp01.norm_sqr()
    }

    /// Multiplies by a unit phase factor e^{iχ}. Physically a no-op; useful
    /// for testing global-phase invariance.
    pub fn with_global_phase(&self, chi: f64) -> Self {
        let phase = Complex64::from_polar(1.0, chi);
        Self {
            amp10: self.amp10 * phase,
            amp01: self.amp01 * phase,
        }
    }
}

/// H = (ω/2)(sinθ cosφ σ_x + sinθ sinφ σ_y + cosθ σ_z): the general
/// Hamiltonian on the subspace, as a rotation axis n̂(θ, φ) and rate ω.
///
/// Eigenvalues are ±ω/2. Requires ω ≥ 0 and θ ∈ [0, π]; φ is periodic and
/// reduced into [0, 2π).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochHamiltonian {
    omega: f64,
    theta: f64,
    phi: f64,
}

impl BlochHamiltonian {
    pub fn new(omega: f64, theta: f64, phi: f64) -> Result<Self> {
        if !omega.is_finite() || omega < 0.0 {
            return Err(Error::InvalidBlochParameter {
                name: "omega",
                value: omega,
                reason: "must be finite and >= 0",
            });
        }
        if !theta.is_finite() || !(0.0..=PI).contains(&theta) {
            return Err(Error::InvalidBlochParameter {
                name: "theta",
                value: theta,
                reason: "must lie in [0, pi]",
            });
        }
        if !phi.is_finite() {
            return Err(Error::InvalidBlochParameter {
                name: "phi",
                value: phi,
                reason: "must be finite",
            });
        }
        Ok(Self {
            omega,
            theta,
            phi: phi.rem_euclid(TAU),
        })
    }

    /// An equatorial-axis Hamiltonian (θ = π/2), the family for which σ_z
    /// conjugation reverses time.
    pub fn equatorial(omega: f64, phi: f64) -> Result<Self> {
        Self::new(omega, PI / 2.0, phi)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// The Hermitian matrix (ω/2)(n̂·σ⃗) in the {|1_a 0_b⟩, |0_a 1_b⟩} basis.
    pub fn matrix(&self) -> Matrix2<Complex64> {
        let half_omega = 0.5 * self.omega;
        let (sin_t, cos_t) = self.theta.sin_cos();
        let transverse = Complex64::from_polar(half_omega * sin_t, -self.phi);
        Matrix2::new(
            Complex64::from(half_omega * cos_t),
            transverse,
            transverse.conj(),
            Complex64::from(-half_omega * cos_t),
        )
    }

    /// exp(-i H t), in closed form:
    /// U = cos(ωt/2)·I - i sin(ωt/2)·(n̂·σ⃗).
    ///
    /// Negative `t` is first-class: reverse evolution is how the echo
    /// identity is stated.
    pub fn propagator(&self, t: f64) -> Propagator2 {
        let half_angle = 0.5 * self.omega * t;
        let (s, c) = half_angle.sin_cos();
        let (sin_t, cos_t) = self.theta.sin_cos();
        let transverse = -I * Complex64::from_polar(s * sin_t, -self.phi);
        Propagator2::from_matrix_unchecked(Matrix2::new(
            Complex64::from(c) - I * (s * cos_t),
            transverse,
            -transverse.conj(),
            Complex64::from(c) + I * (s * cos_t),
        ))
    }

    /// The same exp(-i H t) via the generic matrix-exponential oracle, for
    /// cross-checking.
    pub fn propagator_via_oracle(&self, t: f64) -> Result<Propagator2> {
        let m = self.matrix();
        let h = DMatrix::from_row_slice(2, 2, &[m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]]);
        let u = crate::linalg::matrix_exp_oracle(&h, t)?;
        Propagator2::new(Matrix2::new(u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]))
    }
}

/// Two bosonic modes at common frequency ω exchanging one photon at hopping
/// rate g (the ħg(a†b + b†a) interaction).
///
/// With a single shared excitation the dynamics closes on the subspace, where
/// the hopping term acts as g·σ_x. The common-frequency term only contributes
/// the global phase e^{-iωt}, which [`Self::propagator`] drops (interaction
/// picture); [`Self::global_phase`] reconstructs it when a display needs it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledModeSystem {
    g: f64,
    omega: f64,
}

impl CoupledModeSystem {
    pub fn new(g: f64, omega: f64) -> Result<Self> {
        if !g.is_finite() || g <= 0.0 {
            return Err(Error::InvalidCoupling(g));
        }
        Ok(Self { g, omega })
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// The interaction-picture propagator cos(gt)·I - i sin(gt)·σ_x.
    ///
    /// Identical to [`BlochHamiltonian::propagator`] with ω = 2g, θ = π/2,
    /// φ = 0: the equatorial condition every kick identity relies on.
    pub fn propagator(&self, t: f64) -> Propagator2 {
        let (s, c) = (self.g * t).sin_cos();
        Propagator2::from_matrix_unchecked(Matrix2::new(
            Complex64::from(c),
            -I * s,
            -I * s,
            Complex64::from(c),
        ))
    }

    /// The dropped global phase e^{-iωt} of the common-frequency term.
    pub fn global_phase(&self, t: f64) -> Complex64 {
        Complex64::from_polar(1.0, -self.omega * t)
    }

    /// The subspace Bloch parameterization of the hopping Hamiltonian.
    pub fn bloch(&self) -> BlochHamiltonian {
        BlochHamiltonian {
            omega: 2.0 * self.g,
            theta: PI / 2.0,
            phi: 0.0,
        }
    }
}

/// A 2x2 unitary acting on [`SubspaceState`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Propagator2 {
    m: Matrix2<Complex64>,
}

impl Propagator2 {
    /// Validates unitarity and |det| = 1 at [`CONSTRUCTION_TOL`].
    pub fn new(m: Matrix2<Complex64>) -> Result<Self> {
        let candidate = Self { m };
        let residual = candidate.unitarity_residual();
        if residual > CONSTRUCTION_TOL {
            return Err(Error::NotUnitary {
                residual,
                limit: CONSTRUCTION_TOL,
            });
        }
        let det_defect = (m.determinant().norm() - 1.0).abs();
        if det_defect > CONSTRUCTION_TOL {
            return Err(Error::NotUnitary {
                residual: det_defect,
                limit: CONSTRUCTION_TOL,
            });
        }
        Ok(candidate)
    }

    /// Wraps a matrix with no unitarity check; for matrices that are unitary
    /// by construction (closed forms, products of unitaries).
    pub fn from_matrix_unchecked(m: Matrix2<Complex64>) -> Self {
        Self { m }
    }

    pub fn identity() -> Self {
        Self {
            m: Matrix2::identity(),
        }
    }

    /// The instantaneous kick diag(1, -1): the σ_z operator
    /// |1_a 0_b⟩⟨1_a 0_b| - |0_a 1_b⟩⟨0_a 1_b|. Its own inverse.
    pub fn sigma_z() -> Self {
        Self {
            m: Matrix2::new(
                Complex64::ONE,
                Complex64::ZERO,
                Complex64::ZERO,
                -Complex64::ONE,
            ),
        }
    }

    /// σ_x = |1,0⟩⟨0,1| + |0,1⟩⟨1,0|.
    pub fn sigma_x() -> Self {
        Self {
            m: Matrix2::new(
                Complex64::ZERO,
                Complex64::ONE,
                Complex64::ONE,
                Complex64::ZERO,
            ),
        }
    }

    pub fn matrix(&self) -> &Matrix2<Complex64> {
        &self.m
    }

    /// max |U†U - I| over all elements.
    pub fn unitarity_residual(&self) -> f64 {
        let gram = self.m.adjoint() * self.m;
        let delta = gram - Matrix2::identity();
        delta.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
    }

    /// u·s. Refuses to act if the unitarity residual exceeds
    /// [`APPLY_UNITARITY_TOL`]; the output norm is then preserved to
    /// [`CONSTRUCTION_TOL`].
    pub fn apply(&self, s: &SubspaceState) -> Result<SubspaceState> {
        let residual = self.unitarity_residual();
        if residual > APPLY_UNITARITY_TOL {
            return Err(Error::NotUnitary {
                residual,
                limit: APPLY_UNITARITY_TOL,
            });
        }
        let v = self.m * s.as_vector();
        Ok(SubspaceState {
            amp10: v[0],
            amp01: v[1],
        })
    }

    /// max |self - other| over all elements.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.m - other.m)
            .iter()
            .fold(0.0f64, |acc, z| acc.max(z.norm()))
    }
}

impl Mul for Propagator2 {
    type Output = Propagator2;

    fn mul(self, rhs: Propagator2) -> Propagator2 {
        Propagator2::from_matrix_unchecked(self.m * rhs.m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn assert_close(z: Complex64, w: Complex64, tol: f64) {
        assert!(
            (z - w).norm() <= tol,
            "expected {w}, got {z} (|diff| = {:.3e})",
            (z - w).norm()
        );
    }

    #[test]
    fn bloch_angles_at_pole_give_photon_in_a() {
        let s = SubspaceState::from_bloch_angles(0.0, 0.0);
        assert_close(s.amp10(), Complex64::ONE, 0.0);
        assert_close(s.amp01(), Complex64::ZERO, 0.0);
    }

    #[test]
    fn bloch_angles_on_equator_give_bell_state() {
        let s = SubspaceState::from_bloch_angles(PI / 2.0, 0.0);
        assert_close(s.amp10(), Complex64::from(SQRT_HALF), 1e-15);
        assert_close(s.amp01(), Complex64::from(SQRT_HALF), 1e-15);
    }

    #[test]
    fn bloch_angles_quarter_phase_gives_imaginary_amp() {
        let s = SubspaceState::from_bloch_angles(PI / 2.0, PI / 2.0);
        assert_close(s.amp10(), Complex64::from(SQRT_HALF), 1e-15);
        assert_close(s.amp01(), I * SQRT_HALF, 1e-15);
    }

    #[test]
    fn state_constructor_rejects_unnormalized_amplitudes() {
        let err = SubspaceState::new(Complex64::from(0.9), Complex64::from(0.9));
        assert!(matches!(err, Err(Error::NotNormalized(_))));
    }

    #[test]
    fn propagator_at_zero_time_is_identity() {
        let h = BlochHamiltonian::new(2.0, 1.0, 0.3).unwrap();
        assert!(h.propagator(0.0).max_abs_diff(&Propagator2::identity()) < 1e-15);
    }

    #[test]
    fn equatorial_propagator_quarter_period_is_minus_i_sigma_x() {
        // omega = 2, theta = pi/2, phi = 0, t = pi/2: rotation angle pi about x.
        let h = BlochHamiltonian::new(2.0, PI / 2.0, 0.0).unwrap();
        let u = h.propagator(PI / 2.0);
        let m = u.matrix();
        assert_close(m[(0, 0)], Complex64::ZERO, 1e-15);
        assert_close(m[(0, 1)], -I, 1e-15);
        assert_close(m[(1, 0)], -I, 1e-15);
        assert_close(m[(1, 1)], Complex64::ZERO, 1e-15);
    }

    #[test]
    fn closed_form_matches_oracle_at_fixed_parameters() {
        let h = BlochHamiltonian::new(2.0, PI / 3.0, PI / 5.0).unwrap();
        let closed = h.propagator(0.7);
        let oracle = h.propagator_via_oracle(0.7).unwrap();
        assert!(closed.max_abs_diff(&oracle) < 1e-12);
    }

    #[test]
    fn coupled_modes_quarter_period_swaps_the_photon() {
        let sys = CoupledModeSystem::new(7.0, 0.0).unwrap();
        let t = PI / (2.0 * sys.g());
        let swapped = sys
            .propagator(t)
            .apply(&SubspaceState::photon_in_a())
            .unwrap();
        assert_close(swapped.amp10(), Complex64::ZERO, 1e-15);
        assert_close(swapped.amp01(), -I, 1e-15);
    }

    #[test]
    fn coupled_modes_half_period_is_minus_identity() {
        let sys = CoupledModeSystem::new(3.0, 0.0).unwrap();
        let u = sys.propagator(PI / sys.g());
        let expected = Propagator2::from_matrix_unchecked(Matrix2::identity() * -Complex64::ONE);
        assert!(u.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn coupled_modes_match_frozen_example_values() {
        // g = 1e3, t = 3e-4 so gt = 0.3.
        let sys = CoupledModeSystem::new(1e3, 0.0).unwrap();
        let u = sys.propagator(3e-4);
        let m = u.matrix();
        assert!((m[(0, 0)].re - 0.955_336_489_125_606).abs() < 1e-12);
        assert!((m[(0, 1)].im + 0.295_520_206_661_339_55).abs() < 1e-12);
        let oracle = sys.bloch().propagator_via_oracle(3e-4).unwrap();
        assert!(u.max_abs_diff(&oracle) < 1e-12);
    }

    #[test]
    fn coupled_mode_propagator_equals_equatorial_bloch_propagator() {
        let sys = CoupledModeSystem::new(2.5, 0.0).unwrap();
        let h = sys.bloch();
        for &t in &[0.0, 0.1, 0.7, -1.3, 42.0] {
            assert!(sys.propagator(t).max_abs_diff(&h.propagator(t)) <= 1e-14);
        }
    }

    #[test]
    fn sigma_z_fixes_photon_in_a_and_flips_photon_in_b() {
        let kick = Propagator2::sigma_z();
        let a = kick.apply(&SubspaceState::photon_in_a()).unwrap();
        assert_close(a.amp10(), Complex64::ONE, 0.0);
        let b = kick.apply(&SubspaceState::photon_in_b()).unwrap();
        assert_close(b.amp01(), -Complex64::ONE, 0.0);
    }

    #[test]
    fn sigma_z_is_an_involution() {
        let twice = Propagator2::sigma_z() * Propagator2::sigma_z();
        assert!(twice.max_abs_diff(&Propagator2::identity()) == 0.0);
    }

    #[test]
    fn sigma_z_dephases_the_bell_state() {
        let s = Propagator2::sigma_z()
            .apply(&SubspaceState::bell())
            .unwrap();
        assert_close(s.amp10(), Complex64::from(SQRT_HALF), 1e-15);
        assert_close(s.amp01(), Complex64::from(-SQRT_HALF), 1e-15);
    }

    #[test]
    fn apply_rejects_non_unitary_matrices() {
        let bad = Propagator2::from_matrix_unchecked(Matrix2::new(
            Complex64::from(1.1),
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::ONE,
        ));
        assert!(matches!(
            bad.apply(&SubspaceState::photon_in_a()),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn hamiltonian_constructor_validates_ranges() {
        assert!(BlochHamiltonian::new(-1.0, 0.0, 0.0).is_err());
        assert!(BlochHamiltonian::new(1.0, PI + 0.1, 0.0).is_err());
        assert!(BlochHamiltonian::new(1.0, 0.0, f64::NAN).is_err());
        // phi is periodic, not rejected
        let h = BlochHamiltonian::new(1.0, 0.5, 3.0 * TAU + 0.25).unwrap();
        assert!((h.phi() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn coupled_mode_constructor_rejects_nonpositive_coupling() {
        assert!(matches!(
            CoupledModeSystem::new(0.0, 0.0),
            Err(Error::InvalidCoupling(_))
        ));
        assert!(CoupledModeSystem::new(-3.0, 0.0).is_err());
    }

    #[test]
    fn hamiltonian_matrix_has_symmetric_spectrum() {
        let h = BlochHamiltonian::new(3.0, 1.1, 2.2).unwrap();
        let eig = crate::linalg::hermitian_eigenvalues_2x2(&h.matrix());
        assert!((eig[0] + 1.5).abs() < 1e-12 && (eig[1] - 1.5).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn propagators_are_unitary(
            omega in 0.0..20.0f64,
            theta in 0.0..PI,
            phi in 0.0..TAU,
            t in -10.0..10.0f64,
        ) {
            let u = BlochHamiltonian::new(omega, theta, phi).unwrap().propagator(t);
            prop_assert!(u.unitarity_residual() <= 1e-12);
            prop_assert!((u.matrix().determinant().norm() - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn propagators_compose_over_time(
            omega in 0.0..20.0f64,
            theta in 0.0..PI,
            phi in 0.0..TAU,
            t1 in -5.0..5.0f64,
            t2 in -5.0..5.0f64,
        ) {
            let h = BlochHamiltonian::new(omega, theta, phi).unwrap();
            let composed = h.propagator(t1) * h.propagator(t2);
            prop_assert!(composed.max_abs_diff(&h.propagator(t1 + t2)) <= 1e-11);
        }

        #[test]
        fn closed_form_matches_oracle(
            omega in 0.0..20.0f64,
            theta in 0.0..PI,
            phi in 0.0..TAU,
            t in -10.0..10.0f64,
        ) {
            let h = BlochHamiltonian::new(omega, theta, phi).unwrap();
            let closed = h.propagator(t);
            let oracle = h.propagator_via_oracle(t).unwrap();
            prop_assert!(closed.max_abs_diff(&oracle) <= 1e-10);
        }

        #[test]
        fn apply_preserves_the_norm(
            theta0 in 0.0..TAU,
            phi0 in 0.0..TAU,
            omega in 0.0..20.0f64,
            theta in 0.0..PI,
            phi in 0.0..TAU,
            t in -10.0..10.0f64,
        ) {
            let s = SubspaceState::from_bloch_angles(theta0, phi0);
            let u = BlochHamiltonian::new(omega, theta, phi).unwrap().propagator(t);
            let out = u.apply(&s).unwrap();
            prop_assert!((out.norm_sqr() - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn equatorial_sigma_z_conjugation_reverses_time(
            omega in 0.0..20.0f64,
            phi in 0.0..TAU,
            t in -5.0..5.0f64,
        ) {
            let h = BlochHamiltonian::equatorial(omega, phi).unwrap();
            let kick = Propagator2::sigma_z();
            let conjugated = kick * h.propagator(t) * kick;
            prop_assert!(conjugated.max_abs_diff(&h.propagator(-t)) <= 1e-12);
        }

        #[test]
        fn polar_axis_breaks_the_reversal(
            omega in 0.5..10.0f64,
            t in 0.05..2.0f64,
        ) {
            // theta = 0 commutes with the kick; residual is bounded away from
            // zero whenever ωt is not a multiple of pi.
            prop_assume!((omega * t).sin().abs() > 1e-3);
            let h = BlochHamiltonian::new(omega, 0.0, 0.0).unwrap();
            let kick = Propagator2::sigma_z();
            let conjugated = kick * h.propagator(t) * kick;
            let residual = conjugated.max_abs_diff(&h.propagator(-t));
            prop_assert!(residual >= (omega * t).sin().abs());
        }
    }
}
