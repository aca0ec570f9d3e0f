//! Run reports and output writing.
//!
//! Every run produces a [`RunReport`]: the resolved config echo, the
//! command's results payload, and one [`Check`] per declared tolerance.
//! JSON output serializes the whole report (`schema_version` 1); CSV
//! output replaces it with the command's documented column schema while
//! the checks still decide the exit status. Wall-clock timing stays out
//! of the serialized payload so identical configs produce bitwise
//! identical files; it is printed to stderr instead. Files are written
//! atomically: a `.tmp` sibling is renamed over the destination.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;

use crate::config::{usage, CliResult, ExperimentConfig};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// One declared-tolerance verdict. `pass` is a pure function of `value`
/// and `tolerance`; the comparison direction is fixed per check and
/// documented with the command.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub value: f64,
    pub tolerance: f64,
}

impl Check {
    /// Residual-style check: passes when `value <= tolerance`.
    pub fn below(name: &str, value: f64, tolerance: f64) -> Self {
        Check { name: name.to_string(), pass: value <= tolerance, value, tolerance }
    }

    /// Lower-bound check: passes when `value > tolerance`.
    pub fn above(name: &str, value: f64, tolerance: f64) -> Self {
        Check { name: name.to_string(), pass: value > tolerance, value, tolerance }
    }
}

/// What a command hands back before serialization.
pub struct Outcome {
    pub format: OutputFormat,
    /// Destination path; stdout when absent.
    pub out: Option<PathBuf>,
    pub checks: Vec<Check>,
    pub results: Value,
    /// CSV rendering of the payload, present iff the command documents
    /// a CSV schema.
    pub csv: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub config: ExperimentConfig,
    pub checks: Vec<Check>,
    pub results: Value,
    /// Wall-clock duration; stderr only, never serialized.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl RunReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Serialize the payload for the chosen format.
pub fn render(report: &RunReport, format: OutputFormat, csv: Option<&str>) -> String {
    match format {
        OutputFormat::Json => {
            // report fields are maps with string keys and finite floats,
            // which serde_json always accepts
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        OutputFormat::Csv => csv.expect("command declared a CSV schema").to_string(),
    }
}

/// Atomic write: temp file in the destination directory, then rename.
pub fn write_output(path: &Path, payload: &str) -> CliResult<()> {
    let mut tmp_name = path
        .file_name()
        .ok_or_else(|| usage(format!("output path {} has no file name", path.display())))?
        .to_os_string();
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    fs::write(&tmp, payload)
        .map_err(|e| usage(format!("cannot write {}: {e}", tmp.display())))?;
    fs::rename(&tmp, path)
        .map_err(|e| usage(format!("cannot rename {} into place: {e}", tmp.display())))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_directions_and_report_verdict() {
        assert!(Check::below("res", 1e-12, 1e-10).pass);
        assert!(!Check::below("res", 1e-8, 1e-10).pass);
        assert!(Check::above("gap", 0.5, 0.0).pass);
        assert!(!Check::above("gap", 0.0, 0.0).pass);
        let report = RunReport {
            schema_version: SCHEMA_VERSION,
            config: ExperimentConfig {
                command: "flux".to_string(),
                keys: Default::default(),
            },
            checks: vec![Check::below("a", 0.0, 1.0), Check::below("b", 2.0, 1.0)],
            results: serde_json::json!({}),
            elapsed: Duration::ZERO,
        };
        assert!(!report.all_pass());
        // timing must not leak into the serialized payload
        let text = render(&report, OutputFormat::Json, None);
        assert!(!text.contains("elapsed"));
        assert!(text.contains("schema_version"));
    }
}
