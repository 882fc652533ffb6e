use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Info,
}

impl Verdict {
    pub fn from_check(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Fail => 1,
            _ => 0,
        }
    }
}

/// Outcome of one command. `serde_json` maps are sorted, so serialization
/// is deterministic.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub verdict: Verdict,
    pub details: Value,
    pub witnesses: Value,
}

impl Report {
    pub fn new(command: &str, inputs: Map<String, Value>, verdict: Verdict, details: Value) -> Self {
        Report {
            command: command.to_string(),
            inputs,
            verdict,
            details,
            witnesses: Value::Object(Map::new()),
        }
    }

    pub fn with_witnesses(mut self, witnesses: Value) -> Self {
        self.witnesses = witnesses;
        self
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string(self).expect("report values are plain JSON");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let verdict = serde_json::to_value(self.verdict).expect("unit variant");
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        let _ = writeln!(out, "verdict: {}", verdict.as_str().unwrap_or_default());
        for (label, value) in [
            ("inputs", Value::Object(self.inputs.clone())),
            ("details", self.details.clone()),
            ("witnesses", self.witnesses.clone()),
        ] {
            if matches!(&value, Value::Object(m) if m.is_empty()) {
                continue;
            }
            let _ = writeln!(out, "{label}:");
            let body = serde_json::to_string_pretty(&value).expect("plain JSON");
            for line in body.lines() {
                let _ = writeln!(out, "  {line}");
            }
        }
        out
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Input(m) => write!(f, "input error: {m}"),
        }
    }
}

impl From<ordtop::Error> for CliError {
    fn from(e: ordtop::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(e.to_string())
    }
}
