use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

/// One verification step; `expected` and `actual` are rendered values.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub expected: Value,
    pub actual: Value,
    pub paper_ref: String,
}

impl Check {
    pub fn new(name: &str, expected: impl Into<Value>, actual: impl Into<Value>, reference: &str) -> Self {
        let expected = expected.into();
        let actual = actual.into();
        Self {
            name: name.into(),
            passed: expected == actual,
            expected,
            actual,
            paper_ref: reference.into(),
        }
    }

    pub fn flag(name: &str, passed: bool, reference: &str) -> Self {
        Self::new(name, true, passed, reference)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub model: String,
    #[serde(flatten)]
    pub summary: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl Report {
    pub fn new(command: &str, model: &str) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            command: command.into(),
            model: model.into(),
            summary: BTreeMap::new(),
            checks: Vec::new(),
            passed: true,
        }
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.summary.insert(key.into(), value.into());
    }

    pub fn push(&mut self, check: Check) {
        self.passed &= check.passed;
        self.checks.push(check);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} [{}]", self.command, self.model);
        for (k, v) in &self.summary {
            let _ = writeln!(out, "  {k}: {}", render(v));
        }
        for c in &self.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            if c.passed {
                let _ = writeln!(out, "  {mark} {}", c.name);
            } else {
                let _ = writeln!(
                    out,
                    "  {mark} {} (expected {}, got {})",
                    c.name,
                    render(&c.expected),
                    render(&c.actual)
                );
            }
        }
        let n_failed = self.checks.iter().filter(|c| !c.passed).count();
        let _ = writeln!(out, "{} checks, {n_failed} failed", self.checks.len());
        out
    }
}

fn render(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
