//! Machine-readable run reports.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize)]
pub struct Input {
    pub path: String,
    pub sha256: String,
}

/// Everything needed to reproduce a run: inputs with their hashes, the
/// seed, and the tool version.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub subcommand: String,
    pub version: &'static str,
    pub args: Vec<String>,
    pub inputs: Vec<Input>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub verdict: String,
    pub passed: bool,
    pub witnesses: Vec<String>,
    pub wall_time_ms: f64,
    pub details: serde_json::Value,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Collects a report while a subcommand runs.
#[derive(Debug)]
pub struct Recorder {
    started: Instant,
    pub report: RunReport,
}

impl Recorder {
    pub fn new(subcommand: &str, args: Vec<String>) -> Self {
        Self {
            started: Instant::now(),
            report: RunReport {
                subcommand: subcommand.into(),
                version: env!("CARGO_PKG_VERSION"),
                args,
                inputs: Vec::new(),
                seed: None,
                verdict: String::new(),
                passed: false,
                witnesses: Vec::new(),
                wall_time_ms: 0.0,
                details: serde_json::Value::Null,
            },
        }
    }

    /// Reads a file, recording its hash.
    pub fn read(&mut self, path: &Path) -> std::io::Result<String> {
        let bytes = std::fs::read(path)?;
        self.report.inputs.push(Input { path: path.display().to_string(), sha256: sha256_hex(&bytes) });
        String::from_utf8(bytes).map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))
    }

    pub fn witness(&mut self, path: PathBuf) {
        self.report.witnesses.push(path.display().to_string());
    }

    pub fn finish(mut self, verdict: impl Into<String>, passed: bool) -> RunReport {
        self.report.verdict = verdict.into();
        self.report.passed = passed;
        self.report.wall_time_ms = self.started.elapsed().as_secs_f64() * 1e3;
        self.report
    }
}

impl RunReport {
    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, crate::format::pretty(self))
    }
}
