//! Datasets: the structured output of every run.
//!
//! A dataset is a metadata block (effective config, convention, tool
//! version, free-form notes) plus rows of samples. Two serializations:
//!
//! * CSV: header `t,gt,concurrence,kicks,fidelity,p00`, one row per
//!   sample, decimal notation with 12 significant digits, newline
//!   terminated. The `p00` cell is empty unless the run used the finite-
//!   pulse atom model.
//! * JSON: `{ "metadata": {...}, "rows": [...] }`.
//!
//! Emission is deterministic: the same config produces byte-identical
//! files on every run.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, OutputFormat};
use crate::entanglement::Convention;
use crate::error::{Error, Result};

/// One sample row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DatasetRow {
    /// Time in seconds.
    pub t: f64,
    /// Dimensionless time g·t, the natural axis of the protocol.
    pub gt: f64,
    pub concurrence: f64,
    /// Kicks applied up to and including this sample.
    pub kicks: usize,
    /// Overlap fidelity with the initial state.
    pub fidelity: f64,
    /// Vacuum population, present only for finite-pulse runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p00: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetMetadata {
    pub tool: String,
    pub version: String,
    pub convention: Convention,
    /// The effective (normalized) config that produced the rows.
    pub config: ExperimentConfig,
    /// Human-readable caveats: column semantics, substitutions, regimes.
    pub notes: Vec<String>,
}

impl DatasetMetadata {
    pub fn new(config: &ExperimentConfig, notes: Vec<String>) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            convention: config.convention,
            config: config.clone(),
            notes,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub metadata: DatasetMetadata,
    pub rows: Vec<DatasetRow>,
}

impl Dataset {
    /// Checks the row-level invariants: time ordering and convention bounds.
    pub fn validate(&self) -> Result<()> {
        let cap = self.metadata.convention.max_value();
        let mut previous = f64::NEG_INFINITY;
        for (k, row) in self.rows.iter().enumerate() {
            if row.t < previous {
                return Err(Error::Serialize(format!(
                    "row {k} breaks time ordering: t = {} after {previous}",
                    row.t
                )));
            }
            previous = row.t;
            if !(-1e-12..=cap + 1e-9).contains(&row.concurrence) {
                return Err(Error::Serialize(format!(
                    "row {k} concurrence {} outside [0, {cap}]",
                    row.concurrence
                )));
            }
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,gt,concurrence,kicks,fidelity,p00\n");
        for row in &self.rows {
            let p00 = row.p00.map(format_sig12).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                format_sig12(row.t),
                format_sig12(row.gt),
                format_sig12(row.concurrence),
                row.kicks,
                format_sig12(row.fidelity),
                p00
            );
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        let mut text =
            serde_json::to_string_pretty(self).map_err(|e| Error::Serialize(e.to_string()))?;
        text.push('\n');
        Ok(text)
    }

    /// Writes the dataset in the requested format, creating parent
    /// directories as needed.
    pub fn write(&self, format: OutputFormat, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        self.validate()?;
        let payload = match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json()?,
        };
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
            }
        }
        std::fs::write(path, payload).map_err(|e| Error::io(path, e))
    }
}

/// Decimal notation with 12 significant digits. No exponents, so the files
/// read back cleanly anywhere.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (11 - exponent).clamp(0, 330) as usize;
    format!("{x:.decimals$}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn empty_dataset() -> Dataset {
        let cfg = ExperimentConfig::parse("").unwrap();
        Dataset {
            metadata: DatasetMetadata::new(&cfg, vec![]),
            rows: vec![],
        }
    }

    #[test]
    fn empty_dataset_is_a_bare_header() {
        assert_eq!(
            empty_dataset().to_csv(),
            "t,gt,concurrence,kicks,fidelity,p00\n"
        );
    }

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_sig12(0.0), "0");
        assert_eq!(format_sig12(1.0), "1.00000000000");
        assert_eq!(format_sig12(0.0993346653975306), "0.0993346653975");
        assert_eq!(format_sig12(-0.5), "-0.500000000000");
        assert_eq!(format_sig12(1234.5), "1234.50000000");
        // tiny values stay in decimal notation
        let tiny = format_sig12(1.5e-7);
        assert!(tiny.starts_with("0.000000150000"));
    }

    #[test]
    fn csv_rows_follow_the_schema() {
        let mut ds = empty_dataset();
        ds.rows.push(DatasetRow {
            t: 3e-4,
            gt: 0.3,
            concurrence: 0.25,
            kicks: 1,
            fidelity: 0.9,
            p00: None,
        });
        ds.rows.push(DatasetRow {
            t: 3e-4,
            gt: 0.3,
            concurrence: 0.25,
            kicks: 2,
            fidelity: 0.9,
            p00: Some(1e-6),
        });
        let csv = ds.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[1].ends_with(",1,0.900000000000,"));
        assert!(lines[2].contains(",2,"));
        assert!(lines[2].ends_with("0.00000100000000000"));
        assert!(csv.ends_with('\n'));
    }

    #[test]
    fn json_round_trips() {
        let mut ds = empty_dataset();
        ds.rows.push(DatasetRow {
            t: 1e-4,
            gt: 0.1,
            concurrence: 0.09,
            kicks: 0,
            fidelity: 1.0,
            p00: Some(0.0),
        });
        let text = ds.to_json().unwrap();
        let back: Dataset = serde_json::from_str(&text).unwrap();
        assert_eq!(ds, back);
    }

    #[test]
    fn validation_rejects_disordered_rows() {
        let mut ds = empty_dataset();
        ds.rows.push(DatasetRow {
            t: 2.0,
            gt: 2.0,
            concurrence: 0.0,
            kicks: 0,
            fidelity: 1.0,
            p00: None,
        });
        ds.rows.push(DatasetRow {
            t: 1.0,
            gt: 1.0,
            concurrence: 0.0,
            kicks: 0,
            fidelity: 1.0,
            p00: None,
        });
        assert!(ds.validate().is_err());
    }

    #[test]
    fn validation_rejects_out_of_convention_concurrence() {
        let mut ds = empty_dataset();
        ds.rows.push(DatasetRow {
            t: 0.0,
            gt: 0.0,
            concurrence: 0.7, // beyond the paper bound of 1/2
            kicks: 0,
            fidelity: 1.0,
            p00: None,
        });
        assert!(ds.validate().is_err());
    }

    #[test]
    fn metadata_embeds_the_effective_config() {
        let ds = empty_dataset();
        assert_eq!(ds.metadata.config.g(), 1e3);
        assert_eq!(ds.metadata.tool, "cavity-echo");
    }
}
