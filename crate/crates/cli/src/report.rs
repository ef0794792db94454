//! Structured record of a run: enough to reproduce it exactly.

use std::path::Path;
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;

use crate::{CliError, CliResult};

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    /// Full argument vector as given.
    pub argv: Vec<String>,
    pub version: &'static str,
    pub seed: Option<u64>,
    /// Every effective setting, defaults included.
    pub settings: Value,
    pub elapsed_seconds: f64,
    pub results: Value,
}

impl RunReport {
    pub fn new(command: &str, seed: Option<u64>, settings: Value, results: Value) -> Self {
        RunReport {
            command: command.to_string(),
            argv: Vec::new(),
            version: env!("CARGO_PKG_VERSION"),
            seed,
            settings,
            elapsed_seconds: 0.0,
            results,
        }
    }

    pub fn with_run_info(mut self, argv: Vec<String>, elapsed: Duration) -> Self {
        self.argv = argv;
        self.elapsed_seconds = elapsed.as_secs_f64();
        self
    }

    pub fn to_json(&self) -> CliResult<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        write_file(path, &self.to_json()?)
    }
}

pub fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}
