//! Finite-duration realization of the σ_z kick by a two-level atom crossing
//! mode b.
//!
//! One excitation shared among mode a, mode b and the atom closes the
//! dynamics on the three-dimensional space
//!
//! ```text
//! {|1_a 0_b, g⟩,  |0_a 1_b, g⟩,  |0_a 0_b, e⟩}
//! ```
//!
//! where the atom couples to mode b through the resonant exchange
//! γ(b†|g⟩⟨e| + b|e⟩⟨g|). A pulse of duration τ with γτ = π imprints a -1
//! phase on |0_a 1_b, g⟩ and leaves |1_a 0_b, g⟩ alone: restricted to the
//! one-photon subspace that *is* the σ_z kick. The idealization treats the
//! pulse as instantaneous; this module keeps the a–b hopping running during
//! the pulse (unless frozen) and measures exactly how good the idealization
//! is.
//!
//! Every atom is fresh, interacts once and is discarded: by partial trace
//! by default, or by post-selection on the ground state with the success
//! probability recorded. The photon the atom occasionally carries away shows
//! up as explicit vacuum population `p00`, never renormalized away under the
//! trace disposal.
//!
//! All 3x3 propagators are computed through [`matrix_exp_oracle`]; there is
//! no closed form on this path by design.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix2, Matrix3};
use num_complex::Complex64;

use crate::entanglement::{concurrence_mixed, Convention, DENSITY_TOL};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues_2x2, hermitian_eigenvalues_3x3, matrix_exp_oracle};
use crate::sequence::KickSchedule;
use crate::subspace::{CoupledModeSystem, SubspaceState};

/// Trace bookkeeping beyond this is flagged as a numerical failure.
pub const TRACE_TOL: f64 = 1e-9;

/// How a used atom leaves the description.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AtomDisposal {
    /// Partial trace over the atom: the assumption-free default.
    #[default]
    Trace,
    /// Project onto the atomic ground state and renormalize, recording the
    /// success probability.
    Postselect,
}

/// Atom–field pulse: coupling γ, duration τ, and whether the a–b hopping is
/// artificially frozen while the atom transits.
///
/// For the exchange Hamiltonian used here the phase flip happens at γτ = π;
/// [`PulseParams::pi_pulse`] picks that duration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseParams {
    gamma: f64,
    tau: f64,
    freeze_hopping: bool,
}

impl PulseParams {
    pub fn new(gamma: f64, tau: f64, freeze_hopping: bool) -> Result<Self> {
        if !gamma.is_finite() || gamma <= 0.0 {
            return Err(Error::InvalidPulseParameter {
                name: "gamma",
                value: gamma,
            });
        }
        if !tau.is_finite() || tau <= 0.0 {
            return Err(Error::InvalidPulseParameter {
                name: "tau",
                value: tau,
            });
        }
        Ok(Self {
            gamma,
            tau,
            freeze_hopping,
        })
    }

    /// The phase-flip pulse τ = π/γ.
    pub fn pi_pulse(gamma: f64, freeze_hopping: bool) -> Result<Self> {
        Self::new(gamma, PI / gamma, freeze_hopping)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn freeze_hopping(&self) -> bool {
        self.freeze_hopping
    }
}

/// The joint Hamiltonian on the one-excitation space: mode hopping g between
/// the first two basis vectors (present iff `hopping_on`), Jaynes–Cummings
/// exchange γ between the last two. The common diagonal frequency is dropped
/// (interaction picture).
pub fn full_hamiltonian(g: f64, gamma: f64, hopping_on: bool) -> Matrix3<Complex64> {
    let hop = Complex64::from(if hopping_on { g } else { 0.0 });
    let exchange = Complex64::from(gamma);
    Matrix3::new(
        Complex64::ZERO,
        hop,
        Complex64::ZERO,
        hop,
        Complex64::ZERO,
        exchange,
        Complex64::ZERO,
        exchange,
        Complex64::ZERO,
    )
}

/// exp(-i H τ) for the joint Hamiltonian, computed only via the generic
/// matrix-exponential oracle.
pub fn pulse_propagator(g: f64, pulse: &PulseParams) -> Result<Matrix3<Complex64>> {
    let h3 = full_hamiltonian(g, pulse.gamma, !pulse.freeze_hopping);
    let h = DMatrix::from_fn(3, 3, |i, j| h3[(i, j)]);
    let u = matrix_exp_oracle(&h, pulse.tau)?;
    Ok(Matrix3::from_fn(|i, j| u[(i, j)]))
}

/// A normalized density matrix on the joint one-excitation basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullSpaceDensity {
    rho: Matrix3<Complex64>,
}

impl FullSpaceDensity {
    /// Validates Hermiticity and unit trace at 1e-12 and positivity at
    /// -1e-10.
    pub fn new(rho: Matrix3<Complex64>) -> Result<Self> {
        let mut herm: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                herm = herm.max((rho[(i, j)] - rho[(j, i)].conj()).norm());
            }
        }
        if herm > 1e-12 {
            return Err(Error::NonPhysicalDensity(format!(
                "not Hermitian (residual {herm:.3e})"
            )));
        }
        let trace = rho[(0, 0)].re + rho[(1, 1)].re + rho[(2, 2)].re;
        if (trace - 1.0).abs() > 1e-12 {
            return Err(Error::NonPhysicalDensity(format!(
                "trace deviates from 1 by {:.3e}",
                (trace - 1.0).abs()
            )));
        }
        let eig = hermitian_eigenvalues_3x3(&rho);
        if eig[0] < -DENSITY_TOL {
            return Err(Error::NonPhysicalDensity(format!(
                "negative eigenvalue {:.3e}",
                eig[0]
            )));
        }
        Ok(Self { rho })
    }

    /// |ψ⟩⟨ψ| ⊗ |g⟩⟨g| for a pure subspace state: the joint state the moment
    /// a fresh ground-state atom enters.
    pub fn from_subspace(s: &SubspaceState) -> Self {
        let mut rho = Matrix3::zeros();
        let v = s.as_vector();
        for i in 0..2 {
            for j in 0..2 {
                rho[(i, j)] = v[i] * v[j].conj();
            }
        }
        Self { rho }
    }

    pub fn rho(&self) -> &Matrix3<Complex64> {
        &self.rho
    }

    /// Population of |0_a 0_b, e⟩.
    pub fn atom_excitation(&self) -> f64 {
        self.rho[(2, 2)].re
    }

    /// The two-mode block of a state whose atom is still in the ground
    /// state. Rejects atom excitation above the density tolerance.
    pub fn restrict_to_ground(&self) -> Result<ModeDensity> {
        let excited = self.atom_excitation();
        if excited > DENSITY_TOL {
            return Err(Error::AtomExcited(excited));
        }
        ModeDensity::new(self.rho.fixed_view::<2, 2>(0, 0).into_owned(), 0.0)
    }
}

/// A two-mode state in the {|1_a 0_b⟩, |0_a 1_b⟩, |0_a 0_b⟩} sector: the
/// one-excitation block plus the vacuum population left behind by atoms that
/// carried the photon away.
///
/// Excitation conservation keeps the vacuum decoupled from the block, so
/// `(rho, p00)` is the complete description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeDensity {
    rho: Matrix2<Complex64>,
    p00: f64,
}

impl ModeDensity {
    pub fn new(rho: Matrix2<Complex64>, p00: f64) -> Result<Self> {
        let herm = (rho[(0, 1)] - rho[(1, 0)].conj())
            .norm()
            .max(rho[(0, 0)].im.abs())
            .max(rho[(1, 1)].im.abs());
        if herm > DENSITY_TOL {
            return Err(Error::NonPhysicalDensity(format!(
                "block not Hermitian (residual {herm:.3e})"
            )));
        }
        if p00 < -DENSITY_TOL {
            return Err(Error::NonPhysicalDensity(format!(
                "negative vacuum population {p00:.3e}"
            )));
        }
        let eig = hermitian_eigenvalues_2x2(&rho);
        if eig[0] < -DENSITY_TOL {
            return Err(Error::NonPhysicalDensity(format!(
                "negative eigenvalue {:.3e}",
                eig[0]
            )));
        }
        let leak = (rho[(0, 0)].re + rho[(1, 1)].re + p00 - 1.0).abs();
        if leak > TRACE_TOL {
            return Err(Error::TraceLeak(leak));
        }
        Ok(Self { rho, p00 })
    }

    pub fn from_pure(s: &SubspaceState) -> Self {
        let v = s.as_vector();
        Self {
            rho: v * v.adjoint(),
            p00: 0.0,
        }
    }

    pub fn rho(&self) -> &Matrix2<Complex64> {
        &self.rho
    }

    pub fn p00(&self) -> f64 {
        self.p00
    }

    /// tr ρ²  + p00² over the full sector; 1 for pure states.
    pub fn purity(&self) -> f64 {
        let block = (self.rho * self.rho).trace().re;
        block + self.p00 * self.p00
    }

    pub fn concurrence(&self, convention: Convention) -> Result<f64> {
        concurrence_mixed(&self.rho, self.p00, convention)
    }

    /// Uhlmann fidelity to a pure target, √⟨ψ|ρ|ψ⟩.
    pub fn fidelity_to_pure(&self, target: &SubspaceState) -> f64 {
        let v = target.as_vector();
        (v.adjoint() * self.rho * v)[(0, 0)].re.max(0.0).sqrt()
    }

    /// Trace distance ½‖ρ - |ψ⟩⟨ψ|‖₁ over the three-dimensional sector.
    pub fn trace_distance_to_pure(&self, target: &SubspaceState) -> f64 {
        self.trace_distance(&ModeDensity::from_pure(target))
    }

    /// Trace distance between two sector states. The difference is block
    /// diagonal (coherences to the vacuum vanish identically), so the
    /// eigenvalues come from the 2x2 block plus the vacuum gap.
    pub fn trace_distance(&self, other: &ModeDensity) -> f64 {
        let delta = self.rho - other.rho;
        let eig = hermitian_eigenvalues_2x2(&delta);
        0.5 * (eig[0].abs() + eig[1].abs() + (self.p00 - other.p00).abs())
    }

    fn evolve_free(&self, sys: &CoupledModeSystem, t: f64) -> Self {
        let u = sys.propagator(t);
        let m = u.matrix();
        Self {
            rho: m * self.rho * m.adjoint(),
            p00: self.p00,
        }
    }
}

/// The outcome of one atom transit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KickOutcome {
    pub state: ModeDensity,
    /// Probability that the disposal step kept the state: 1 for a partial
    /// trace, the ground-state projection weight for post-selection.
    pub keep_probability: f64,
}

/// Sends one fresh ground-state atom through mode b: embeds the two-mode
/// state with the atom in |g⟩, evolves under [`pulse_propagator`], and
/// disposes of the atom.
///
/// Under [`AtomDisposal::Trace`] any photon the atom carries off appears as
/// added vacuum population; under [`AtomDisposal::Postselect`] the excited
/// outcome is discarded and the survivor renormalized.
pub fn kick_via_atom(
    state: &ModeDensity,
    g: f64,
    pulse: &PulseParams,
    disposal: AtomDisposal,
) -> Result<KickOutcome> {
    let u = pulse_propagator(g, pulse)?;
    let mut joint = Matrix3::zeros();
    for i in 0..2 {
        for j in 0..2 {
            joint[(i, j)] = state.rho[(i, j)];
        }
    }
    let evolved = u * joint * u.adjoint();
    let block = evolved.fixed_view::<2, 2>(0, 0).into_owned();
    let carried_off = evolved[(2, 2)].re;

    match disposal {
        AtomDisposal::Trace => Ok(KickOutcome {
            state: ModeDensity::new(block, state.p00 + carried_off)?,
            keep_probability: 1.0,
        }),
        AtomDisposal::Postselect => {
            let keep = block.trace().re + state.p00;
            if keep < 1e-12 {
                return Err(Error::PostselectionFailed(keep));
            }
            let scale = Complex64::from(1.0 / keep);
            Ok(KickOutcome {
                state: ModeDensity::new(block * scale, state.p00 / keep)?,
                keep_probability: keep,
            })
        }
    }
}

/// One sampled point of a finite-pulse protocol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedSample {
    pub time: f64,
    pub state: ModeDensity,
    pub kicks_applied: usize,
    pub concurrence: f64,
}

/// Density-matrix trajectory of the kicked protocol with physical atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedTrajectory {
    samples: Vec<MixedSample>,
    keep_probability: f64,
}

impl MixedTrajectory {
    pub fn samples(&self) -> &[MixedSample] {
        &self.samples
    }

    pub fn final_sample(&self) -> &MixedSample {
        self.samples.last().expect("trajectory is never empty")
    }

    /// Product of per-kick keep probabilities (1 unless post-selecting).
    pub fn keep_probability(&self) -> f64 {
        self.keep_probability
    }
}

/// Runs the kicked protocol with every σ_z realized by an atom transit.
///
/// Sampling mirrors [`crate::sequence::evolve_kicked`] exactly: endpoints
/// plus `samples_per_segment` interior points per free segment, two samples
/// at each kick time. Kicks are logged at their nominal schedule time; the
/// pulse duration does not advance the protocol clock (the instantaneous
/// idealization being tested). Trace bookkeeping beyond [`TRACE_TOL`] is a
/// numerical failure, not a physical prediction.
pub fn finite_pulse_trajectory(
    s0: &SubspaceState,
    sched: &KickSchedule,
    sys: &CoupledModeSystem,
    pulse: &PulseParams,
    disposal: AtomDisposal,
    samples_per_segment: usize,
    convention: Convention,
) -> Result<MixedTrajectory> {
    let mut samples = Vec::new();
    let mut state = ModeDensity::from_pure(s0);
    let mut kicks_applied = 0usize;
    let mut keep_probability = 1.0f64;
    let mut segment_start = 0.0f64;

    let push = |samples: &mut Vec<MixedSample>, time: f64, state: &ModeDensity, kicks: usize| {
        let leak = (state.rho[(0, 0)].re + state.rho[(1, 1)].re + state.p00 - 1.0).abs();
        if leak > TRACE_TOL {
            return Err(Error::TraceLeak(leak));
        }
        samples.push(MixedSample {
            time,
            state: *state,
            kicks_applied: kicks,
            concurrence: state.concurrence(convention)?,
        });
        Ok(())
    };

    push(&mut samples, 0.0, &state, kicks_applied)?;

    let mut boundaries: Vec<(f64, bool)> = sched.kick_times().iter().map(|&t| (t, true)).collect();
    if boundaries
        .last()
        .is_none_or(|&(t, _)| t < sched.total_time())
    {
        boundaries.push((sched.total_time(), false));
    }

    for (end, has_kick) in boundaries {
        let duration = end - segment_start;
        for j in 1..=samples_per_segment {
            let fraction = j as f64 / (samples_per_segment + 1) as f64;
            let interior = state.evolve_free(sys, duration * fraction);
            push(
                &mut samples,
                segment_start + duration * fraction,
                &interior,
                kicks_applied,
            )?;
        }
        state = state.evolve_free(sys, duration);
        push(&mut samples, end, &state, kicks_applied)?;
        if has_kick {
            let outcome = kick_via_atom(&state, sys.g(), pulse, disposal)?;
            state = outcome.state;
            keep_probability *= outcome.keep_probability;
            kicks_applied += 1;
            push(&mut samples, end, &state, kicks_applied)?;
        }
        segment_start = end;
    }

    Ok(MixedTrajectory {
        samples,
        keep_probability,
    })
}
