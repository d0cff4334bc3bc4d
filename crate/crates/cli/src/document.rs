//! The `{schema_version, command, inputs, result, checks}` envelope.

use serde_json::Value;

use crate::error::CliError;
use crate::json::{as_array, as_bool, as_str, field, object};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq)]
pub struct CheckEntry {
    pub name: String,
    pub pass: bool,
    pub details: Value,
}

impl CheckEntry {
    pub fn new(name: impl Into<String>, pass: bool, details: Value) -> Self {
        CheckEntry { name: name.into(), pass, details }
    }

    pub fn flag(name: impl Into<String>, pass: bool) -> Self {
        CheckEntry::new(name, pass, Value::Null)
    }

    pub fn to_json(&self) -> Value {
        object(vec![("name", Value::String(self.name.clone())), ("pass", Value::Bool(self.pass)), ("details", self.details.clone())])
    }

    pub fn from_json(v: &Value) -> Result<Self, CliError> {
        Ok(CheckEntry {
            name: as_str(field(v, "name")?)?.to_string(),
            pass: as_bool(field(v, "pass")?)?,
            details: field(v, "details")?.clone(),
        })
    }
}

/// Converts library `(name, ok)` pairs.
pub fn flags(pairs: Vec<(&str, bool)>) -> Vec<CheckEntry> {
    pairs.into_iter().map(|(n, ok)| CheckEntry::flag(n, ok)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub command: String,
    pub inputs: Value,
    pub result: Value,
    pub checks: Vec<CheckEntry>,
}

impl Document {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> Value {
        object(vec![
            ("schema_version", Value::String(SCHEMA_VERSION.into())),
            ("command", Value::String(self.command.clone())),
            ("inputs", self.inputs.clone()),
            ("result", self.result.clone()),
            ("checks", Value::Array(self.checks.iter().map(CheckEntry::to_json).collect())),
        ])
    }

    /// Canonical serialization: pretty-printed with a trailing newline.
    pub fn render(&self) -> String {
        render(&self.to_json())
    }

    pub fn from_json(v: &Value) -> Result<Self, CliError> {
        if !v.is_object() {
            return Err(CliError::Schema("document must be an object".into()));
        }
        let version = as_str(field(v, "schema_version")?)?;
        if version != SCHEMA_VERSION {
            return Err(CliError::Schema(format!("unsupported schema_version {version:?}")));
        }
        Ok(Document {
            command: as_str(field(v, "command")?)?.to_string(),
            inputs: field(v, "inputs")?.clone(),
            result: field(v, "result")?.clone(),
            checks: as_array(field(v, "checks")?)?.iter().map(CheckEntry::from_json).collect::<Result<_, _>>()?,
        })
    }
}

pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}
