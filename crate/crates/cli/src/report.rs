//! Report envelope, output and exit codes.

use std::fmt;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::GlobalArgs;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, bad input file or malformed JSON: exit 2.
    Usage(String),
    Core(epw_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use epw_core::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(E::Parse { .. } | E::InvalidPrime(_) | E::Argument(_)) => 2,
            CliError::Core(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub struct Outcome {
    pub report: Value,
    pub passed: bool,
}

#[derive(Serialize)]
struct Tool {
    name: &'static str,
    version: &'static str,
}

#[derive(Serialize)]
struct Constant {
    name: &'static str,
    value: i64,
    source: &'static str,
}

/// Regression constants carried by every report.
fn constants() -> Vec<Constant> {
    let c = |name, value, source| Constant { name, value, source };
    vec![
        c("c0(F)", 1, "published"),
        c("c1(F)", -6, "published"),
        c("c2(F)", 18, "published"),
        c("c3(F)", -34, "published"),
        c("c4(F)", 42, "derived"),
        c("c5(F)", -42, "derived"),
        c("[W_A]/w^3", 40, "published"),
    ]
}

/// `{tool, config, constants, passed, ...result}` with result keys at top level.
pub fn envelope(config: Value, result: impl Serialize, passed: bool) -> CliResult<Outcome> {
    let mut out = Map::new();
    out.insert(
        "tool".into(),
        serde_json::to_value(Tool {
            name: "epw",
            version: env!("CARGO_PKG_VERSION"),
        })
        .unwrap(),
    );
    out.insert("config".into(), config);
    out.insert("constants".into(), serde_json::to_value(constants()).unwrap());
    out.insert("passed".into(), Value::Bool(passed));
    match serde_json::to_value(result).map_err(|e| CliError::Usage(e.to_string()))? {
        Value::Object(m) => out.extend(m),
        other => {
            out.insert("result".into(), other);
        }
    }
    Ok(Outcome {
        report: Value::Object(out),
        passed,
    })
}

pub fn emit(report: &Value, args: &GlobalArgs) -> CliResult<()> {
    let mut text = if args.json {
        serde_json::to_string(report)
    } else {
        serde_json::to_string_pretty(report)
    }
    .map_err(|e| CliError::Usage(e.to_string()))?;
    text.push('\n');
    match &args.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
