//! Report types, JSON and CSV output.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::RunConfig;
use crate::error::Result;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Class {
    /// Counts toward the exit status.
    Failing,
    /// Reported only.
    Informational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Informational,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub class: Class,
    pub passed: bool,
    pub value: Option<f64>,
    pub threshold: Option<f64>,
    pub detail: String,
}

impl Check {
    pub fn failing(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), class: Class::Failing, passed, value: None, threshold: None, detail: detail.into() }
    }

    pub fn info(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { class: Class::Informational, ..Self::failing(name, passed, detail) }
    }

    /// value < threshold
    pub fn below(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        let passed = value < threshold;
        Self { value: Some(value), threshold: Some(threshold), ..Self::failing(name, passed, format!("{value:e} < {threshold:e}")) }
    }

    pub fn with_value(mut self, v: f64) -> Self {
        self.value = Some(v);
        self
    }

    pub fn informational(mut self) -> Self {
        self.class = Class::Informational;
        self
    }

    pub fn status(&self) -> Status {
        match (self.class, self.passed) {
            (Class::Informational, _) => Status::Informational,
            (Class::Failing, true) => Status::Pass,
            (Class::Failing, false) => Status::Fail,
        }
    }
}

/// A CSV table; cells are preformatted so output is byte-stable.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self { name: name.into(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(dir.join(format!("{}.csv", self.name)))?;
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Shortest round-trip formatting.
pub fn cell(v: f64) -> String {
    format!("{v:?}")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub status: Status,
    pub checks: Vec<Check>,
    pub payload: Value,
    #[serde(skip)]
    pub tables: Vec<Table>,
}

impl SuiteReport {
    pub fn new(name: &str, checks: Vec<Check>, payload: Value, tables: Vec<Table>) -> Self {
        let failed = checks.iter().any(|c| c.status() == Status::Fail);
        let status = if failed { Status::Fail } else { Status::Pass };
        Self { name: name.into(), status, checks, payload, tables }
    }

    /// A suite that could not run at all.
    pub fn errored(name: &str, err: &dyn std::fmt::Display) -> Self {
        Self::new(name, vec![Check::failing("completed", false, err.to_string())], Value::Null, Vec::new())
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub tool: String,
    pub version: String,
    pub os: String,
    pub arch: String,
}

impl Environment {
    pub fn current() -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            os: std::env::consts::OS.into(),
            arch: std::env::consts::ARCH.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub status: Status,
    pub environment: Environment,
    pub config: Value,
    pub suites: Vec<SuiteReport>,
}

impl VerificationReport {
    pub fn new(config: &RunConfig, suites: Vec<SuiteReport>) -> Result<Self> {
        let failed = suites.iter().any(|s| s.status == Status::Fail);
        Ok(Self {
            schema: SCHEMA,
            status: if failed { Status::Fail } else { Status::Pass },
            environment: Environment::current(),
            config: serde_json::to_value(config)?,
            suites,
        })
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteReport> {
        self.suites.iter().find(|s| s.name == name)
    }

    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn to_json(&self) -> Result<String> {
        let v = serde_json::to_value(self)?;
        let mut s = serde_json::to_string_pretty(&v)?;
        s.push('\n');
        Ok(s)
    }

    pub fn write_outputs(&self, config: &RunConfig) -> Result<()> {
        if let Some(p) = &config.json {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            std::fs::write(p, self.to_json()?)?;
        }
        if let Some(dir) = &config.csv_dir {
            std::fs::create_dir_all(dir)?;
            for s in &self.suites {
                for t in &s.tables {
                    t.write(dir)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn informational_never_fails() {
        let s = SuiteReport::new("x", vec![Check::info("i", false, ""), Check::below("r", 1e-12, 1e-8)], Value::Null, vec![]);
        assert_eq!(s.status, Status::Pass);
        let s = SuiteReport::new("x", vec![Check::below("r", 1e-3, 1e-8)], Value::Null, vec![]);
        assert_eq!(s.status, Status::Fail);
    }

    #[test]
    fn json_round_trip() {
        let s = SuiteReport::new("x", vec![Check::below("r", 0.1, 1.0)], serde_json::json!({"a": [1.5, null]}), vec![]);
        let r = VerificationReport::new(&RunConfig::default(), vec![s]).unwrap();
        let text = r.to_json().unwrap();
        let back: VerificationReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_json().unwrap(), text);
        assert_eq!(back.schema, SCHEMA);
    }

    #[test]
    fn table_written() {
        let dir = tempfile::tempdir().unwrap();
        let mut t = Table::new("demo", &["a", "b"]);
        t.push(vec![cell(0.1), cell(-4.0)]);
        t.write(dir.path()).unwrap();
        let text = std::fs::read_to_string(dir.path().join("demo.csv")).unwrap();
        assert_eq!(text, "a,b\n0.1,-4.0\n");
    }
}
