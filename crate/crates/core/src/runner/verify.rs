//! The `verify` subcommand: every protocol identity and numerical contract,
//! run with a fixed seed and reported as a pass/fail table.
//!
//! These are the same invariants the acceptance test suite pins; keeping
//! them callable at runtime makes any installation self-checking.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::atom_kick::{finite_pulse_trajectory, AtomDisposal, PulseParams};
use crate::config::ExperimentConfig;
use crate::entanglement::{amplitudes, concurrence_pure, Convention};
use crate::error::Result;
use crate::runner::{run_figure1, run_figure2, run_simulate, sweep_n};
use crate::sequence::{echo_residual, evolve_kicked, reversal_residual, KickSchedule};
use crate::subspace::{BlochHamiltonian, CoupledModeSystem, Propagator2, SubspaceState};

/// Verdict of one named check.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn bound(name: &'static str, worst: f64, limit: f64) -> Self {
        Check {
            name,
            passed: worst <= limit,
            detail: format!("worst {worst:.3e} (limit {limit:.1e})"),
        }
    }
}

const SEED: u64 = 0x5eed_ca71;

fn random_state(rng: &mut impl Rng) -> SubspaceState {
    SubspaceState::from_bloch_angles(rng.random_range(0.0..TAU), rng.random_range(0.0..TAU))
}

fn random_hamiltonian(rng: &mut impl Rng) -> BlochHamiltonian {
    BlochHamiltonian::new(
        rng.random_range(0.0..20.0),
        rng.random_range(0.0..PI),
        rng.random_range(0.0..TAU),
    )
    .expect("in-range draws")
}

fn check_unitarity() -> Check {
    let mut rng = ChaCha12Rng::seed_from_u64(SEED);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let u = random_hamiltonian(&mut rng).propagator(rng.random_range(-10.0..10.0));
        worst = worst.max(u.unitarity_residual());
    }
    Check::bound("propagator-unitarity", worst, 1e-12)
}

fn check_group_property() -> Check {
    let mut rng = ChaCha12Rng::seed_from_u64(SEED + 1);
    let mut worst = 0.0f64;
    for _ in 0..300 {
        let h = random_hamiltonian(&mut rng);
        let (t1, t2) = (rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
        let composed = h.propagator(t1) * h.propagator(t2);
        worst = worst.max(composed.max_abs_diff(&h.propagator(t1 + t2)));
    }
    Check::bound("propagator-group-property", worst, 1e-11)
}

fn check_oracle_equivalence() -> Result<Check> {
    let mut rng = ChaCha12Rng::seed_from_u64(SEED + 2);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let h = random_hamiltonian(&mut rng);
        let t = rng.random_range(-10.0..10.0);
        worst = worst.max(h.propagator(t).max_abs_diff(&h.propagator_via_oracle(t)?));
    }
    Ok(Check::bound("closed-form-vs-exp-oracle", worst, 1e-10))
}

fn check_coupled_equals_equatorial() -> Check {
    let mut rng = ChaCha12Rng::seed_from_u64(SEED + 3);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let sys = CoupledModeSystem::new(rng.random_range(0.1..2000.0), 0.0).unwrap();
        let t = rng.random_range(-2.0..2.0) / sys.g();
        worst = worst.max(sys.propagator(t).max_abs_diff(&sys.bloch().propagator(t)));
    }
    Check::bound("hopping-equals-equatorial-axis", worst, 1e-14)
}

fn check_reversal_identity() -> Check {
    let mut rng = ChaCha12Rng::seed_from_u64(SEED + 4);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let h =
            BlochHamiltonian::equatorial(rng.random_range(0.0..20.0), rng.random_range(0.0..TAU))
                .unwrap();
        worst = worst.max(reversal_residual(&h, rng.random_range(-5.0..5.0)));
    }
    let mut check = Check::bound("sigma-z-time-reversal", worst, 1e-12);

    // negative control: a polar axis commutes with the kick instead
    let polar = BlochHamiltonian::new(1.0, 0.0, 0.0).unwrap();
    let control = reversal_residual(&polar, FRAC_PI_2);
    if control <= 0.5 {
        check.passed = false;
        check.detail = format!("negative control too small: {control:.3e}");
    }
    check
}

fn check_echo_identity() -> Result<Check> {
    let mut rng = ChaCha12Rng::seed_from_u64(SEED + 5);
    let sys = CoupledModeSystem::new(1e3, 0.0).unwrap();
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let s0 = random_state(&mut rng);
        let g_total: f64 = rng.random_range(0.01..20.0);
        let n = 2 * rng.random_range(1..=64usize);
        worst = worst.max(echo_residual(&s0, g_total / sys.g(), n, &sys)?);
    }
    Ok(Check::bound("even-kick-echo", worst, 1e-9))
}

fn check_amplitude_consistency() -> Result<Check> {
    let mut rng = ChaCha12Rng::seed_from_u64(SEED + 6);
    let sys = CoupledModeSystem::new(1.0, 0.0).unwrap();
    let mut worst = 0.0f64;
    for _ in 0..300 {
        let (theta0, phi0) = (rng.random_range(0.0..TAU), rng.random_range(0.0..TAU));
        let t = rng.random_range(-10.0..10.0);
        let closed = amplitudes(theta0, phi0, 1.0, t);
        let evolved = sys
            .propagator(t)
            .apply(&SubspaceState::from_bloch_angles(theta0, phi0))?;
        worst = worst
            .max((closed.alpha() - evolved.amp10()).norm())
            .max((closed.beta() - evolved.amp01()).norm());
    }
    Ok(Check::bound("closed-form-amplitudes", worst, 1e-12))
}

fn check_kick_concurrence_invariance() -> Result<Check> {
    let mut rng = ChaCha12Rng::seed_from_u64(SEED + 7);
    let kick = Propagator2::sigma_z();
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let s = random_state(&mut rng);
        let before = concurrence_pure(s, Convention::Paper);
        let after = concurrence_pure(kick.apply(&s)?, Convention::Paper);
        worst = worst.max((before - after).abs());
    }
    Ok(Check::bound("kick-preserves-concurrence", worst, 0.0))
}

fn fig2_schedule(g: f64) -> KickSchedule {
    KickSchedule::new(0.3 / g, vec![0.1 / g, 0.2 / g, 0.3 / g]).unwrap()
}

fn check_frozen_pulse_ideal_limit() -> Result<Check> {
    let g = 1e3;
    let sys = CoupledModeSystem::new(g, 0.0)?;
    let s0 = SubspaceState::bell();
    let sched = fig2_schedule(g);
    let pulse = PulseParams::pi_pulse(1e4 * g, true)?;
    let mixed = finite_pulse_trajectory(
        &s0,
        &sched,
        &sys,
        &pulse,
        AtomDisposal::Trace,
        8,
        Convention::Paper,
    )?;
    let ideal = evolve_kicked(&s0, &sched, &sys, 8)?;
    let mut worst = 0.0f64;
    let mut worst_p00 = 0.0f64;
    for (m, p) in mixed.samples().iter().zip(ideal.samples()) {
        worst = worst.max(m.state.trace_distance_to_pure(&p.state));
        worst_p00 = worst_p00.max(m.state.p00());
    }
    let mut check = Check::bound("frozen-pulse-ideal-limit", worst, 1e-10);
    if worst_p00 > 1e-12 {
        check.passed = false;
        check
            .detail
            .push_str(&format!(", vacuum leak {worst_p00:.3e}"));
    }
    Ok(check)
}

fn check_pulse_speed_monotonicity() -> Result<Check> {
    let g = 1e3;
    let sys = CoupledModeSystem::new(g, 0.0)?;
    let s0 = SubspaceState::bell();
    let sched = fig2_schedule(g);
    let ideal = evolve_kicked(&s0, &sched, &sys, 0)?;
    let mut distances = Vec::new();
    for ratio in [10.0, 1e2, 1e3, 1e4] {
        let pulse = PulseParams::pi_pulse(ratio * g, false)?;
        let mixed = finite_pulse_trajectory(
            &s0,
            &sched,
            &sys,
            &pulse,
            AtomDisposal::Trace,
            0,
            Convention::Paper,
        )?;
        distances.push(
            mixed
                .final_sample()
                .state
                .trace_distance_to_pure(ideal.final_state()),
        );
    }
    let monotone = distances.windows(2).all(|w| w[1] < w[0]);
    Ok(Check {
        name: "pulse-error-shrinks-with-speed",
        passed: monotone,
        detail: format!(
            "final trace distances over gamma/g in {{10,1e2,1e3,1e4}}: {}",
            distances
                .iter()
                .map(|d| format!("{d:.3e}"))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    })
}

fn check_reference_regime_gap() -> Result<Check> {
    // g = 1e3 rad/s with the 10 microsecond pi pulse
    let g = 1e3;
    let sys = CoupledModeSystem::new(g, 0.0)?;
    let s0 = SubspaceState::photon_in_a();
    let sched = fig2_schedule(g);
    let pulse = PulseParams::new(PI * 1e5, 1e-5, false)?;
    let mixed = finite_pulse_trajectory(
        &s0,
        &sched,
        &sys,
        &pulse,
        AtomDisposal::Trace,
        0,
        Convention::Paper,
    )?;
    let ideal = evolve_kicked(&s0, &sched, &sys, 0)?;
    let gap = (mixed.final_sample().concurrence
        - concurrence_pure(*ideal.final_state(), Convention::Paper))
    .abs();
    Ok(Check::bound("reference-regime-concurrence-gap", gap, 1e-2))
}

fn check_figure1() -> Result<Check> {
    let cfg = ExperimentConfig::parse("")?;
    let (free, kicked) = run_figure1(&cfg)?;
    let revival = kicked.rows.last().unwrap().concurrence;
    let free_end = free.rows.last().unwrap().concurrence;
    let expected_free = 1.2f64.sin().abs() / 2.0;
    let worst = revival.max((free_end - expected_free).abs());
    Ok(Check::bound("figure1-structure", worst, 1e-9))
}

fn check_figure2() -> Result<Check> {
    let cfg = ExperimentConfig::parse("")?;
    let ds = run_figure2(&cfg)?;
    let bound = 0.2f64.sin().abs() / 2.0;
    let mut worst = 0.0f64;
    for row in &ds.rows {
        worst = worst.max(row.concurrence - bound);
        if row.kicks == 2 && (row.gt - 0.2).abs() < 1e-12 {
            worst = worst.max(row.concurrence);
        }
    }
    Ok(Check::bound("figure2-structure", worst, 1e-9))
}

fn check_sweep() -> Result<Check> {
    let cfg = ExperimentConfig::parse("")?;
    let ns = [2usize, 4, 8, 16, 32, 64];
    let ds = sweep_n(&cfg, &ns)?;
    let g_total = FRAC_PI_2;
    let mut worst = 0.0f64;
    for (row, &n) in ds.rows.iter().zip(&ns) {
        let expected = (2.0 * g_total / n as f64).sin().abs() / 2.0;
        worst = worst.max((row.concurrence - expected).abs());
    }
    let mut check = Check::bound("sweep-n-closed-form", worst, 1e-9);
    let decreasing = ds
        .rows
        .windows(2)
        .all(|w| w[1].concurrence < w[0].concurrence);
    if !decreasing {
        check.passed = false;
        check
            .detail
            .push_str(", deviations not strictly decreasing");
    }
    for pair in ds.rows.windows(2) {
        if pair[0].kicks >= 16 {
            let ratio = pair[1].concurrence / pair[0].concurrence;
            if (ratio - 0.5).abs() > 0.05 {
                check.passed = false;
                check
                    .detail
                    .push_str(&format!(", halving ratio off: {ratio:.4}"));
            }
        }
    }
    Ok(check)
}

fn check_units() -> Result<Check> {
    let cfg = ExperimentConfig::parse("")?;
    let t = cfg.total_time();
    let expected = PI / 2e3;
    let passed = cfg.g() == 1e3
        && t == expected
        && (t - 1.571e-3).abs() < 1e-6
        && (1e-4..1e-2).contains(&t)
        && cfg.pulse()?.tau() == 1e-5;
    Ok(Check {
        name: "physical-units-sanity",
        passed,
        detail: format!(
            "defaults: g = {} rad/s, T = {t:.6e} s, tau_pi = {:.1e} s",
            cfg.g(),
            cfg.pulse()?.tau()
        ),
    })
}

fn check_determinism() -> Result<Check> {
    let dir = tempfile::tempdir().map_err(|e| crate::error::Error::io("tempdir", e))?;
    let cfg = ExperimentConfig::parse(
        "[protocol]\ngt_total = 0.3\nkick_gts = [0.1, 0.2, 0.3]\n[oracle]\nenabled = true",
    )?;
    let mut identical = true;
    for format in [
        crate::config::OutputFormat::Csv,
        crate::config::OutputFormat::Json,
    ] {
        let a = dir.path().join("a.out");
        let b = dir.path().join("b.out");
        run_simulate(&cfg)?.write(format, &a)?;
        run_simulate(&cfg)?.write(format, &b)?;
        let bytes_a = std::fs::read(&a).map_err(|e| crate::error::Error::io(&a, e))?;
        let bytes_b = std::fs::read(&b).map_err(|e| crate::error::Error::io(&b, e))?;
        identical &= bytes_a == bytes_b;
    }
    Ok(Check {
        name: "emit-determinism",
        passed: identical,
        detail: if identical {
            "repeated runs are byte-identical (csv and json)".to_string()
        } else {
            "outputs differ between runs".to_string()
        },
    })
}

/// Runs every check. Deterministic: fixed seeds, no environment dependence.
pub fn run_all() -> Result<Vec<Check>> {
    Ok(vec![
        check_unitarity(),
        check_group_property(),
        check_oracle_equivalence()?,
        check_coupled_equals_equatorial(),
        check_reversal_identity(),
        check_echo_identity()?,
        check_amplitude_consistency()?,
        check_kick_concurrence_invariance()?,
        check_frozen_pulse_ideal_limit()?,
        check_pulse_speed_monotonicity()?,
        check_reference_regime_gap()?,
        check_figure1()?,
        check_figure2()?,
        check_sweep()?,
        check_units()?,
        check_determinism()?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_check_passes() {
        let checks = run_all().unwrap();
        assert_eq!(checks.len(), 16);
        for check in &checks {
            assert!(check.passed, "{} failed: {}", check.name, check.detail);
        }
    }

    #[test]
    fn checks_are_deterministic() {
        let first = run_all().unwrap();
        let second = run_all().unwrap();
        for (a, b) in first.iter().zip(&second) {
            assert_eq!(a.detail, b.detail);
        }
    }
}
