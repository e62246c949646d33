use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::{CliError, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Output of one subcommand. Timings are the only field that varies between
/// runs with the same parameters.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub version: String,
    pub parameters: BTreeMap<String, Value>,
    pub results: Value,
    pub timings: BTreeMap<String, f64>,
    pub passed: bool,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            version: VERSION.to_string(),
            parameters: BTreeMap::new(),
            results: Value::Null,
            timings: BTreeMap::new(),
            passed: true,
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.parameters.insert(key.to_string(), v);
        self
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Exit status: 0 when every check passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Where and how a report is written.
#[derive(Debug, Clone)]
pub struct Output {
    pub format: Format,
    pub path: Option<PathBuf>,
}

impl Output {
    pub fn write(&self, report: &RunReport, csv_rows: Option<String>) -> Result<()> {
        let text = match self.format {
            Format::Json => report.to_json()? + "\n",
            Format::Csv => csv_rows.ok_or_else(|| {
                CliError::Config(format!("command `{}` has no CSV form", report.command))
            })?,
        };
        match &self.path {
            Some(p) => std::fs::write(p, text)?,
            None => print!("{text}"),
        }
        Ok(())
    }
}

/// Integers wider than 2^53 lose precision in JSON numbers; counts are
/// written as decimal strings.
pub fn decimal<S: Serializer>(n: &u64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

pub fn decimal_opt<S: Serializer>(n: &Option<u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match n {
        Some(n) => s.serialize_str(&n.to_string()),
        None => s.serialize_none(),
    }
}

pub fn decimal_vec<S: Serializer>(v: &[u64], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|n| n.to_string()))
}

/// One named property and its outcome.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl Check {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            passed,
            detail: detail.into(),
            counterexample: None,
        }
    }

    /// Passes when `first_failure` is `None`; otherwise records it.
    pub fn from_search(name: &str, detail: impl Into<String>, first_failure: Option<String>) -> Self {
        Self {
            name: name.to_string(),
            passed: first_failure.is_none(),
            detail: detail.into(),
            counterexample: first_failure,
        }
    }
}
