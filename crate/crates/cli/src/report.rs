use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;

pub const SCHEMA: &str = "limgrp.report.v1";

/// A run's output. Object keys serialize in sorted order and rows keep the
/// order the pipeline produced them in, which is fixed per config.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub versions: BTreeMap<&'static str, &'static str>,
    pub command: &'static str,
    pub config: Value,
    pub summary: Value,
    pub rows: Vec<Value>,
    /// False when a checked property failed; the process then exits 2.
    pub passed: bool,
}

impl Report {
    pub fn new(command: &'static str, config: Value) -> Self {
        Report {
            schema: SCHEMA,
            versions: BTreeMap::from([("limgrp", env!("CARGO_PKG_VERSION")), ("limitgroup", limitgroup::VERSION)]),
            command,
            config,
            summary: Value::Null,
            rows: Vec::new(),
            passed: true,
        }
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// To `path`, or stdout.
    pub fn write(&self, path: Option<&Path>) -> Result<(), CliError> {
        let text = self.to_json()?;
        match path {
            Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
            None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
        }
    }
}

pub(crate) fn rows<T: Serialize>(items: &[T]) -> Result<Vec<Value>, CliError> {
    items.iter().map(|r| serde_json::to_value(r).map_err(CliError::from)).collect()
}
