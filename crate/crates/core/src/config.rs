//! Experiment configuration: a strict TOML schema with physical defaults.
//!
//! Unknown keys are rejected; silent misconfiguration is the main failure
//! mode of simulation tools. A minimal file (even an empty one) is valid and
//! resolves to the reference regime: coupling g = 10³ rad/s, window
//! T = π/(2g) ≈ 1.571e-3 s, photon initially in mode a, paper-convention
//! concurrence, and a 10 µs π pulse for the atom model.
//!
//! ```toml
//! [initial_state]
//! theta0 = 0.0          # Bloch polar angle of the initial state (rad)
//! phi0 = 0.0            # Bloch azimuth (rad)
//!
//! g = 1e3               # mode-hopping rate (rad/s)
//! convention = "paper"  # "paper" (C <= 1/2) or "standard" (C <= 1)
//!
//! [protocol]
//! total_time = 1.5e-3   # window length in seconds, OR:
//! # gt_total = 0.6      # ... the same in dimensionless gt units
//! n_kicks = 2           # periodic kicks, OR one of:
//! # kick_times = [3e-4] # explicit kick times (s)
//! # kick_gts = [0.3]    # explicit kick times (gt units)
//!
//! [oracle]
//! enabled = false       # realize kicks by finite atom pulses
//! gamma = 3.14159e5     # atom-field coupling (rad/s); tau_pi = pi/gamma
//! freeze_hopping = false
//! disposal = "trace"    # or "postselect"
//!
//! [sampling]
//! points_per_segment = 32
//!
//! [output]
//! path = "dataset.csv"
//! format = "csv"        # or "json"
//! ```

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::atom_kick::{AtomDisposal, PulseParams};
use crate::entanglement::Convention;
use crate::error::{Error, Result};
use crate::sequence::KickSchedule;
use crate::subspace::{CoupledModeSystem, SubspaceState};

/// Default mode-hopping rate, the estimated coupling of the waveguide
/// proposal the protocol is sized for.
pub const DEFAULT_G: f64 = 1e3;
/// Default atom-field coupling; makes the π-pulse duration exactly 1e-5 s.
pub const DEFAULT_GAMMA: f64 = PI * 1e5;

/// Output serialization format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InitialStateConfig {
    pub theta0: f64,
    pub phi0: f64,
}

impl Default for InitialStateConfig {
    fn default() -> Self {
        Self {
            theta0: 0.0,
            phi0: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct ProtocolConfig {
    /// Window length in seconds. Mutually exclusive with `gt_total`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total_time: Option<f64>,
    /// Window length as dimensionless gt. Mutually exclusive with
    /// `total_time`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gt_total: Option<f64>,
    /// Number of periodic kicks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_kicks: Option<usize>,
    /// Explicit kick times in seconds.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kick_times: Option<Vec<f64>>,
    /// Explicit kick times in gt units.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kick_gts: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OracleConfig {
    /// Realize each kick by a finite atom pulse instead of an ideal σ_z.
    pub enabled: bool,
    /// Atom-field coupling (rad/s). The π pulse lasts τ = π/γ.
    pub gamma: f64,
    /// Switch the a-b hopping off while an atom transits (the analytic
    /// control; physically the hopping never stops).
    pub freeze_hopping: bool,
    /// What happens to each used atom.
    pub disposal: AtomDisposal,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            enabled: false,
            gamma: DEFAULT_GAMMA,
            freeze_hopping: false,
            disposal: AtomDisposal::Trace,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SamplingConfig {
    /// Interior samples recorded inside each free segment, in addition to
    /// its endpoints.
    pub points_per_segment: usize,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        Self {
            points_per_segment: 32,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub path: PathBuf,
    pub format: OutputFormat,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            path: PathBuf::from("dataset.csv"),
            format: OutputFormat::Csv,
        }
    }
}

/// The full experiment description. See the module docs for the schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub initial_state: InitialStateConfig,
    /// Mode-hopping rate g (rad/s).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<f64>,
    pub protocol: ProtocolConfig,
    pub convention: Convention,
    pub oracle: OracleConfig,
    pub sampling: SamplingConfig,
    pub output: OutputConfig,
}

impl ExperimentConfig {
    /// Parses and validates a TOML config string.
    pub fn parse(text: &str) -> Result<Self> {
        let raw: ExperimentConfig = toml::from_str(text).map_err(|e| Error::ConfigParse {
            path: "<inline>".to_string(),
            source: Box::new(e),
        })?;
        raw.normalized()
    }

    /// Resolves defaults and unit aliases into a canonical form and checks
    /// every range. The result always carries `total_time` in seconds and
    /// kicks as either `n_kicks` or `kick_times` (seconds).
    pub fn normalized(&self) -> Result<Self> {
        let mut cfg = self.clone();

        let g = cfg.g.unwrap_or(DEFAULT_G);
        if !g.is_finite() || g <= 0.0 {
            return Err(Error::config_value("g", "must be positive and finite"));
        }
        cfg.g = Some(g);

        if !cfg.initial_state.theta0.is_finite() || !cfg.initial_state.phi0.is_finite() {
            return Err(Error::config_value(
                "initial_state",
                "theta0 and phi0 must be finite",
            ));
        }

        let total_time = match (cfg.protocol.total_time, cfg.protocol.gt_total) {
            (Some(_), Some(_)) => {
                return Err(Error::config_value(
                    "protocol.total_time",
                    "give either total_time or gt_total, not both",
                ));
            }
            (Some(t), None) => t,
            (None, Some(gt)) => gt / g,
            (None, None) => PI / (2.0 * g),
        };
        if !total_time.is_finite() || total_time <= 0.0 {
            return Err(Error::config_value(
                "protocol.total_time",
                "must be positive and finite",
            ));
        }
        cfg.protocol.total_time = Some(total_time);
        cfg.protocol.gt_total = None;

        let kick_specs = [
            cfg.protocol.n_kicks.is_some(),
            cfg.protocol.kick_times.is_some(),
            cfg.protocol.kick_gts.is_some(),
        ]
        .iter()
        .filter(|&&s| s)
        .count();
        if kick_specs > 1 {
            return Err(Error::config_value(
                "protocol",
                "give at most one of n_kicks, kick_times, kick_gts",
            ));
        }
        if let Some(gts) = cfg.protocol.kick_gts.take() {
            cfg.protocol.kick_times = Some(gts.into_iter().map(|gt| gt / g).collect());
        }
        if kick_specs == 0 {
            cfg.protocol.n_kicks = Some(0);
        }

        // validate the schedule eagerly so errors carry the field name
        cfg.schedule()
            .map_err(|e| Error::config_value("protocol", e.to_string()))?;

        if !cfg.oracle.gamma.is_finite() || cfg.oracle.gamma <= 0.0 {
            return Err(Error::config_value(
                "oracle.gamma",
                "must be positive and finite",
            ));
        }

        Ok(cfg)
    }

    pub fn g(&self) -> f64 {
        self.g.unwrap_or(DEFAULT_G)
    }

    pub fn total_time(&self) -> f64 {
        self.protocol
            .total_time
            .unwrap_or_else(|| PI / (2.0 * self.g()))
    }

    pub fn initial(&self) -> SubspaceState {
        SubspaceState::from_bloch_angles(self.initial_state.theta0, self.initial_state.phi0)
    }

    pub fn system(&self) -> Result<CoupledModeSystem> {
        CoupledModeSystem::new(self.g(), 0.0)
    }

    pub fn schedule(&self) -> Result<KickSchedule> {
        match (&self.protocol.kick_times, self.protocol.n_kicks) {
            (Some(times), _) => KickSchedule::new(self.total_time(), times.clone()),
            (None, Some(n)) => KickSchedule::uniform(self.total_time(), n),
            (None, None) => KickSchedule::free(self.total_time()),
        }
    }

    pub fn pulse(&self) -> Result<PulseParams> {
        PulseParams::pi_pulse(self.oracle.gamma, self.oracle.freeze_hopping)
    }

    /// Serializes the canonical form back to TOML; loading the result
    /// reproduces this config.
    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Serialize(e.to_string()))
    }
}

/// Reads, parses and normalizes a config file.
pub fn load_config(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let raw: ExperimentConfig = toml::from_str(&text).map_err(|e| Error::ConfigParse {
        path: path.display().to_string(),
        source: Box::new(e),
    })?;
    log::debug!("loaded config from {}", path.display());
    raw.normalized()
}
