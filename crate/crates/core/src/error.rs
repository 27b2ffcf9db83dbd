use std::path::PathBuf;

use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not unitary: max |U\u{2020}U - I| = {residual:.3e} exceeds {limit:.1e}")]
    NotUnitary { residual: f64, limit: f64 },

    #[error("matrix is not Hermitian: max |H - H\u{2020}| = {0:.3e}")]
    NotHermitian(f64),

    #[error("matrix exponential oracle requires a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("state is not normalized: ||\u{3c8}||\u{b2} deviates from 1 by {0:.3e}")]
    NotNormalized(f64),

    #[error("invalid Bloch parameter {name}: {value} ({reason})")]
    InvalidBlochParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("coupling constant must be positive and finite, got {0}")]
    InvalidCoupling(f64),

    #[error("invalid kick schedule: {0}")]
    InvalidSchedule(String),

    #[error("echo identity requires an even kick count >= 2, got {0}")]
    EchoKickCount(usize),

    #[error("density matrix is not a physical state: {0}")]
    NonPhysicalDensity(String),

    #[error("atom must start in the ground state: excited population {0:.3e}")]
    AtomExcited(f64),

    #[error("trace leaked during finite-pulse evolution: |tr \u{3c1} + p00 - 1| = {0:.3e}")]
    TraceLeak(f64),

    #[error("post-selection on the atomic ground state kept probability {0:.3e}, too small to renormalize")]
    PostselectionFailed(f64),

    #[error("invalid pulse parameter {name}: {value} (must be positive and finite)")]
    InvalidPulseParameter { name: &'static str, value: f64 },

    #[error("cannot parse config {path}: {source}")]
    ConfigParse {
        path: String,
        #[source]
        source: Box<toml::de::Error>,
    },

    #[error("invalid config field `{field}`: {reason}")]
    ConfigValue { field: String, reason: String },

    #[error("cannot serialize: {0}")]
    Serialize(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn config_value(field: &str, reason: impl Into<String>) -> Self {
        Error::ConfigValue {
            field: field.to_string(),
            reason: reason.into(),
        }
    }
}
