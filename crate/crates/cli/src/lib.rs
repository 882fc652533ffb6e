//! Command-line front end: parses arguments, loads JSON inputs, dispatches to
//! the library and renders a [`Report`].
//!
//! Inputs may be the raw JSON of a poset, lattice, space or fragment, or a
//! previous report whose `details` embeds one, so commands compose through
//! pipes.

pub mod args;
mod commands;
pub mod report;

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::{json, Map, Value};

use ordtop::cutspace::{Fragment, FragmentJson};
use ordtop::topology::{FiniteSpace, SpaceJson};
use ordtop::{FinitePoset, PosetJson};

use args::{Cli, Common, Group};
pub use report::{CliError, Report, Verdict};

/// Runs one invocation; returns the process exit code.
pub fn run<I, T>(argv: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let mut ctx = Ctx {
        common: cli.common.clone(),
        stdin,
    };
    match dispatch(&mut ctx, cli.group) {
        Ok(report) => {
            let text = if ctx.common.pretty {
                report.to_text()
            } else {
                report.to_json_string()
            };
            let written = match &ctx.common.out {
                Some(path) => fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
                None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => report.verdict.exit_code(),
                Err(e) => {
                    let _ = writeln!(stderr, "output error: {e}");
                    2
                }
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            2
        }
    }
}

fn dispatch(ctx: &mut Ctx<'_>, group: Group) -> Result<Report, CliError> {
    match group {
        Group::Poset { cmd } => commands::poset::run(ctx, cmd),
        Group::Lattice { cmd } => commands::lattice::run(ctx, cmd),
        Group::Topo { cmd } => commands::topo::run(ctx, cmd),
        Group::Gen { cmd } => commands::generate::run(ctx, cmd),
        Group::Cutspace { cmd } => commands::cutspace::run(ctx, cmd),
    }
}

pub(crate) struct Ctx<'a> {
    pub common: Common,
    stdin: &'a mut dyn Read,
}

impl Ctx<'_> {
    /// Parameters echoed into every report.
    pub fn inputs(&self) -> Map<String, Value> {
        let c = &self.common;
        let mut m = Map::new();
        m.insert(
            "in".into(),
            json!(c.input.as_ref().map_or("-".to_string(), |p| p.display().to_string())),
        );
        m.insert("seed".into(), json!(c.seed));
        for (key, v) in [("depth", c.depth), ("width", c.width), ("cap", c.cap)] {
            if let Some(v) = v {
                m.insert(key.into(), json!(v));
            }
        }
        if let Some(r) = &c.rationals {
            m.insert("rationals".into(), json!(r));
        }
        m
    }

    pub fn cap_or(&self, default: usize) -> usize {
        self.common.cap.unwrap_or(default)
    }

    pub fn read_value(&mut self) -> Result<Value, CliError> {
        let text = match &self.common.input {
            Some(path) => read_file(path)?,
            None => {
                let mut s = String::new();
                self.stdin
                    .read_to_string(&mut s)
                    .map_err(|e| CliError::Input(format!("standard input: {e}")))?;
                s
            }
        };
        parse_value(&text)
    }

    pub fn poset(&mut self) -> Result<FinitePoset, CliError> {
        load_poset(&self.read_value()?)
    }
}

pub(crate) fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Parses JSON and unwraps a report to its `details`.
pub(crate) fn parse_value(text: &str) -> Result<Value, CliError> {
    if text.trim().is_empty() {
        return Err(CliError::Input("empty input; pass --in FILE or pipe JSON".into()));
    }
    let v: Value = serde_json::from_str(text)?;
    match v {
        Value::Object(mut m) if m.contains_key("command") && m.contains_key("details") => {
            Ok(m.remove("details").unwrap_or(Value::Null))
        }
        other => Ok(other),
    }
}

/// Follows `key` wrappers until an object whose `marker` is an array.
fn find<'v>(v: &'v Value, marker: &str, key: &str, what: &str) -> Result<&'v Value, CliError> {
    let mut cur = v;
    loop {
        if cur.get(marker).is_some_and(Value::is_array) {
            return Ok(cur);
        }
        match cur.get(key) {
            Some(inner) => cur = inner,
            None => {
                return Err(CliError::Input(format!(
                    "expected {what} JSON (an object with `{marker}`)"
                )))
            }
        }
    }
}

pub(crate) fn load_poset(v: &Value) -> Result<FinitePoset, CliError> {
    let json: PosetJson = serde_json::from_value(find(v, "elements", "poset", "poset")?.clone())?;
    Ok(FinitePoset::from_json(&json)?)
}

pub(crate) fn load_space(v: &Value) -> Result<FiniteSpace, CliError> {
    let json: SpaceJson = serde_json::from_value(find(v, "universe", "space", "space")?.clone())?;
    Ok(FiniteSpace::from_json(&json)?)
}

pub(crate) fn load_fragment(v: &Value) -> Result<Fragment, CliError> {
    let json: FragmentJson =
        serde_json::from_value(find(v, "points", "fragment", "fragment")?.clone())?;
    Ok(Fragment::from_json(&json)?)
}
