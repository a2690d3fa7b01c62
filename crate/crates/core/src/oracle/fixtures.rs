//! Plain-text golden fixtures.
//!
//! ```text
//! # comment / header lines
//! name, key=value, key=value, ...
//! ```
//!
//! Every record carries `value` and `bound`; the remaining keys are the
//! inputs and oracle parameters. Values are stored as decimal strings so
//! high-precision digits survive untouched.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

pub const HEADER: &str = "\
# golden fixtures: name, key=value, ...
# every record carries value (oracle result) and bound (tail or extrapolation bound);
# other keys are inputs and oracle parameters";

#[derive(Debug, Clone, PartialEq)]
pub struct FixtureRecord {
    pub name: String,
    pub fields: Vec<(String, String)>,
}

impl FixtureRecord {
    pub fn new(name: impl Into<String>) -> Self {
        FixtureRecord { name: name.into(), fields: Vec::new() }
    }

    pub fn with(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.fields.push((key.into(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn get_f64(&self, key: &str) -> Result<f64> {
        let raw =
            self.get(key).ok_or_else(|| Error::Oracle(format!("fixture '{}' has no field '{key}'", self.name)))?;
        raw.parse().map_err(|_| Error::Oracle(format!("fixture '{}': field '{key}' is not a number: {raw}", self.name)))
    }

    pub fn value(&self) -> Result<f64> {
        self.get_f64("value")
    }

    pub fn bound(&self) -> Result<f64> {
        self.get_f64("bound")
    }

    pub fn to_line(&self) -> String {
        let mut line = self.name.clone();
        for (k, v) in &self.fields {
            let _ = write!(line, ", {k}={v}");
        }
        line
    }
}

pub fn render(records: &[FixtureRecord]) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.to_line());
        out.push('\n');
    }
    out
}

pub fn parse(text: &str) -> Result<Vec<FixtureRecord>> {
    let mut records = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split(',').map(str::trim);
        let name = parts.next().unwrap_or_default();
        if name.is_empty() || name.contains('=') {
            return Err(Error::Oracle(format!("fixture line {}: missing record name", i + 1)));
        }
        let mut record = FixtureRecord::new(name);
        for part in parts {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Oracle(format!("fixture line {}: expected key=value, got '{part}'", i + 1)))?;
            record.fields.push((k.trim().to_string(), v.trim().to_string()));
        }
        if record.get("value").is_none() || record.get("bound").is_none() {
            return Err(Error::Oracle(format!("fixture line {}: record needs value and bound", i + 1)));
        }
        records.push(record);
    }
    Ok(records)
}

pub fn write_file(path: &Path, records: &[FixtureRecord]) -> Result<()> {
    std::fs::write(path, render(records))?;
    Ok(())
}

pub fn read_file(path: &Path) -> Result<Vec<FixtureRecord>> {
    parse(&std::fs::read_to_string(path)?)
}
