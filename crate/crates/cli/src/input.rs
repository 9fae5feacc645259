//! Field selection and Lagrangian input.

use epw_core::lagrangian::{sample_lagrangian, LagrangianJson};
use epw_core::{Field, LagrangianSubspace};
use serde_json::Value;

use crate::report::{CliError, CliResult};
use crate::{FieldArg, GlobalArgs};

pub const DEFAULT_PRIME: u64 = 101;

pub fn checked_prime(p: u64) -> CliResult<u64> {
    Field::prime(p).map_err(|_| CliError::Usage(format!("--prime {p}: expected a prime >= 5 below 2^31")))?;
    Ok(p)
}

/// Field for sampled objects: `--prime` alone selects F_p.
pub fn sample_field(args: &GlobalArgs) -> CliResult<Field> {
    match (args.field, args.prime) {
        (Some(FieldArg::Q), _) | (None, None) => Ok(Field::Rational),
        (Some(FieldArg::Fp), p) | (None, p @ Some(_)) => {
            let p = checked_prime(p.unwrap_or(DEFAULT_PRIME))?;
            Ok(Field::prime(p).unwrap())
        }
    }
}

/// Parses a bare Lagrangian or the `lagrangian` member of a `sample` report.
pub fn parse_lagrangian(text: &str) -> CliResult<LagrangianSubspace> {
    let value: Value = serde_json::from_str(text).map_err(|e| CliError::Usage(format!("malformed JSON: {e}")))?;
    let (value, prefix) = match value {
        Value::Object(mut m) if m.contains_key("lagrangian") => (m.remove("lagrangian").unwrap(), "lagrangian."),
        v => (v, ""),
    };
    let json: LagrangianJson = serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        let field = if path == "." { "(root)".to_string() } else { format!("{prefix}{path}") };
        CliError::Usage(format!("malformed Lagrangian JSON at field `{field}`: {}", e.inner()))
    })?;
    LagrangianSubspace::from_json(&json).map_err(|e| match e {
        epw_core::Error::Parse { field, message } => {
            CliError::Usage(format!("malformed Lagrangian JSON at field `{prefix}{field}`: {message}"))
        }
        other => CliError::Core(other),
    })
}

/// `--in` if given, else the seeded sample.
pub fn lagrangian(args: &GlobalArgs) -> CliResult<LagrangianSubspace> {
    match &args.input {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            parse_lagrangian(&text)
        }
        None => Ok(sample_lagrangian(args.seed, sample_field(args)?)),
    }
}

/// `a` over a prime field: rational input is reduced modulo `--prime` (or
/// `default`); prime-field input must agree with `--prime` when given.
pub fn over_prime(a: LagrangianSubspace, args: &GlobalArgs, default: u64) -> CliResult<LagrangianSubspace> {
    match a.field() {
        Field::Rational => {
            let p = checked_prime(args.prime.unwrap_or(default))?;
            Ok(a.reduce_mod(p)?)
        }
        Field::Prime(q) => match args.prime {
            Some(p) if p != q => Err(CliError::Usage(format!("input is over F_{q} but --prime {p} was given"))),
            _ => Ok(a),
        },
    }
}
