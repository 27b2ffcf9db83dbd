//! Simulator for freezing the evolution (and with it the entanglement) of a single
//! photon shared between two coupled cavity modes, using periodic σ_z kicks.
//!
//! A photon hopping between modes a and b lives in the two-dimensional
//! subspace {|1_a 0_b⟩, |0_a 1_b⟩}. Conjugating the hopping propagator with
//! the σ_z operator reverses time there, so an even number of periodic kicks
//! returns any initial state, and hence its concurrence, exactly. The
//! crate provides:
//!
//! * [`subspace`]: states, Bloch-axis Hamiltonians and closed-form
//!   propagators, plus an independent matrix-exponential oracle
//!   ([`linalg`]) for cross-checking;
//! * [`sequence`]: kick schedules, the kicked evolution, and the echo and
//!   reversal identities as measurable residuals;
//! * [`entanglement`]: concurrence (both normalizations) and fidelity;
//! * [`atom_kick`]: the physically realistic kick, a two-level atom
//!   crossing mode b, used to quantify the instantaneous-kick
//!   approximation;
//! * [`config`], [`dataset`], [`runner`]: a config-driven experiment layer
//!   that reproduces the protocol figures as deterministic CSV/JSON
//!   datasets, behind the `cavity-echo` CLI.
//!
//! The companion guide under `book/` walks through the physics chapter by
//! chapter; its code snippets compile against this crate as doc-tests.

pub mod atom_kick;
pub mod config;
pub mod dataset;
pub mod entanglement;
pub mod error;
pub mod linalg;
pub mod runner;
pub mod sequence;
pub mod subspace;

pub use atom_kick::{
    finite_pulse_trajectory, full_hamiltonian, kick_via_atom, pulse_propagator, AtomDisposal,
    FullSpaceDensity, KickOutcome, MixedSample, MixedTrajectory, ModeDensity, PulseParams,
};
pub use config::{load_config, ExperimentConfig, OutputFormat};
pub use dataset::{Dataset, DatasetMetadata, DatasetRow};
pub use entanglement::{
    amplitudes, concurrence_mixed, concurrence_pure, fidelity, AmplitudePair, Convention,
};
pub use error::{Error, Result};
pub use linalg::matrix_exp_oracle;
pub use sequence::{
    echo_residual, evolve_kicked, reversal_residual, KickSchedule, Trajectory, TrajectorySample,
};
pub use subspace::{BlochHamiltonian, CoupledModeSystem, Propagator2, SubspaceState};
