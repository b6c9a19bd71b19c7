//! Experiment runner: parses a configuration, runs one pipeline of the
//! `limitgroup` library and emits a deterministic JSON report.

pub mod config;
pub mod error;
pub mod report;
mod run;

pub use config::Cli;
pub use error::CliError;
pub use report::{Report, SCHEMA};
pub use run::run;

/// Runs `cli`, writes the report and returns the process exit code: 0 when
/// every check passed, 2 when a checked property or an internal invariant
/// failed, 1 for input and usage errors.
pub fn execute(cli: &Cli) -> u8 {
    match run(cli) {
        Ok(report) => match report.write(cli.output().map(|p| p.as_path())) {
            Ok(()) if report.passed => 0,
            Ok(()) => 2,
            Err(e) => {
                eprintln!("limgrp: {e}");
                e.exit_code()
            }
        },
        Err(e) => {
            eprintln!("limgrp: {e}");
            e.exit_code()
        }
    }
}
