//! Field-by-field comparison of two reports.

use std::collections::BTreeMap;
use std::path::Path;

use serde_json::Value;

use crate::error::{Result, VerifyError};
use crate::report::SCHEMA;

/// |a − b| ≤ tol·max(1, |a|, |b|), with tol looked up by full path, then
/// by the last key, then the default.
#[derive(Clone, Debug, PartialEq)]
pub struct Tolerances {
    pub default: f64,
    pub fields: BTreeMap<String, f64>,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { default: 1e-12, fields: BTreeMap::new() }
    }
}

impl Tolerances {
    /// `key=value` pairs; `default=...` sets the fallback.
    pub fn parse(specs: &[String]) -> Result<Self> {
        let mut t = Self::default();
        for s in specs {
            let (k, v) = s.split_once('=').ok_or_else(|| VerifyError::Config(format!("tolerance '{s}' is not key=value")))?;
            let v: f64 = v.trim().parse().map_err(|_| VerifyError::Config(format!("tolerance '{s}': bad number")))?;
            if !(v >= 0.0) {
                return Err(VerifyError::Config(format!("tolerance '{s}' must be >= 0")));
            }
            match k.trim() {
                "default" => t.default = v,
                k => {
                    t.fields.insert(k.to_string(), v);
                }
            }
        }
        Ok(t)
    }

    fn lookup(&self, path: &str, key: &str) -> f64 {
        self.fields.get(path).or_else(|| self.fields.get(key)).copied().unwrap_or(self.default)
    }
}

fn schema_of(v: &Value, which: &str) -> Result<()> {
    match v.get("schema").and_then(Value::as_u64) {
        Some(s) if s == SCHEMA as u64 => Ok(()),
        Some(s) => Err(VerifyError::Report(format!("{which}: schema {s}, expected {SCHEMA}"))),
        None => Err(VerifyError::Report(format!("{which}: no schema field"))),
    }
}

/// Differences between the `suites` sections of two reports; config and
/// environment are not compared.
pub fn diff_values(a: &Value, b: &Value, tol: &Tolerances) -> Result<Vec<String>> {
    schema_of(a, "first report")?;
    schema_of(b, "second report")?;
    let mut out = Vec::new();
    let empty = Value::Array(Vec::new());
    let (sa, sb) = (a.get("suites").unwrap_or(&empty), b.get("suites").unwrap_or(&empty));
    let name = |v: &Value| v.get("name").and_then(Value::as_str).unwrap_or("?").to_string();
    let (la, lb) = (sa.as_array().cloned().unwrap_or_default(), sb.as_array().cloned().unwrap_or_default());
    for x in &la {
        match lb.iter().find(|y| name(y) == name(x)) {
            Some(y) => walk(&format!("{}", name(x)), "", x, y, tol, &mut out),
            None => out.push(format!("{}: only in the first report", name(x))),
        }
    }
    for y in &lb {
        if !la.iter().any(|x| name(x) == name(y)) {
            out.push(format!("{}: only in the second report", name(y)));
        }
    }
    Ok(out)
}

fn walk(path: &str, key: &str, a: &Value, b: &Value, tol: &Tolerances, out: &mut Vec<String>) {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => {
            let (x, y) = (x.as_f64().unwrap_or(f64::NAN), y.as_f64().unwrap_or(f64::NAN));
            let t = tol.lookup(path, key);
            let d = (x - y).abs();
            if !(d <= t * 1f64.max(x.abs()).max(y.abs())) {
                out.push(format!("{path}: {x:?} -> {y:?} (|diff| {d:e}, tol {t:e})"));
            }
        }
        (Value::Object(x), Value::Object(y)) => {
            for (k, v) in x {
                let p = format!("{path}.{k}");
                match y.get(k) {
                    Some(w) => walk(&p, k, v, w, tol, out),
                    None => out.push(format!("{p}: only in the first report")),
                }
            }
            for k in y.keys().filter(|k| !x.contains_key(*k)) {
                out.push(format!("{path}.{k}: only in the second report"));
            }
        }
        (Value::Array(x), Value::Array(y)) => {
            if x.len() != y.len() {
                out.push(format!("{path}: length {} -> {}", x.len(), y.len()));
            }
            for (i, (v, w)) in x.iter().zip(y).enumerate() {
                walk(&format!("{path}[{i}]"), key, v, w, tol, out);
            }
        }
        _ if a == b => {}
        _ => out.push(format!("{path}: {a} -> {b}")),
    }
}

pub fn diff_files(a: &Path, b: &Path, tol: &Tolerances) -> Result<Vec<String>> {
    let read = |p: &Path| -> Result<Value> {
        let text = std::fs::read_to_string(p).map_err(|e| VerifyError::Report(format!("{}: {e}", p.display())))?;
        serde_json::from_str(&text).map_err(|e| VerifyError::Report(format!("{}: {e}", p.display())))
    };
    diff_values(&read(a)?, &read(b)?, tol)
}
