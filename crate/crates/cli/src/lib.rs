//! Config-driven front end for the latticestat checkers.

pub mod config;
pub mod error;
pub mod explain;
pub mod run;

pub use config::{Overrides, Plan, RawConfig};
pub use error::{exit, CliError, CliResult};
pub use explain::explain;
pub use run::{run, summary, Outcome, Report};

use std::path::Path;

/// Reads, parses and resolves a config file.
pub fn load(path: &Path, over: &Overrides) -> CliResult<Plan> {
    let src = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    Plan::resolve(RawConfig::parse(&src)?, over)
}

/// Serializes a report as pretty JSON.
pub fn to_json(report: &Report) -> CliResult<String> {
    serde_json::to_string_pretty(report).map_err(|e| CliError::Internal(e.to_string()))
}
