//! Experiment runner for `hardy-core`: JSON configs in, JSON reports out.
//!
//! The binary is a thin wrapper over [`run`]; the acceptance suite lives in
//! [`suite`] so the test harness can time each criterion in-process.

pub mod commands;
pub mod config;
mod error;
pub mod report;
pub mod suite;
pub mod symbols;

use std::path::Path;

pub use commands::{execute, Command};
pub use config::Config;
pub use error::{CliError, Result};
pub use report::{strip_timestamps, Report};

/// Exit status for configuration and input errors.
pub const EXIT_CONFIG: i32 = 2;

/// Loads the config, runs the command and writes the optional CSV.
pub fn run(command: Command, config: &Path, out: Option<&Path>, seed: Option<u64>) -> Result<Report> {
    let cfg = Config::load(config, seed)?;
    let report = execute(command, &cfg)?;
    if let Some(path) = out {
        report.write_csv(path)?;
    }
    Ok(report)
}
