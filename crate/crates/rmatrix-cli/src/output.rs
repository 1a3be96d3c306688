use std::fs::File;
use std::io::{self, Write};
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{Number, Value};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// 17 significant digits, enough to round-trip a binary64.
pub fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

/// JSON number with 17 significant digits (`null` when not finite).
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(Number::from_str(&sig17(x)).expect("valid number"))
    } else {
        Value::Null
    }
}

/// Rewrites every non-integer number in `v` to 17 significant digits.
fn normalize(v: &mut Value) {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => {
            if let Some(x) = n.as_f64() {
                *v = num(x);
            }
        }
        Value::Array(a) => a.iter_mut().for_each(normalize),
        Value::Object(o) => o.values_mut().for_each(normalize),
        _ => {}
    }
}

pub fn to_value<T: Serialize>(x: &T) -> Result<Value, CliError> {
    let mut v = serde_json::to_value(x)?;
    normalize(&mut v);
    Ok(v)
}

pub fn sink(out: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match out {
        Some(p) => Box::new(io::BufWriter::new(File::create(p).map_err(|e| CliError::Io(p.display().to_string(), e))?)),
        None => Box::new(io::BufWriter::new(io::stdout().lock())),
    })
}

pub fn write_json(out: Option<&Path>, v: &Value) -> Result<(), CliError> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, v)?;
    writeln!(w).and_then(|_| w.flush()).map_err(|e| CliError::Io("output".into(), e))
}

pub fn write_text(out: Option<&Path>, s: &str) -> Result<(), CliError> {
    let mut w = sink(out)?;
    w.write_all(s.as_bytes()).and_then(|_| w.flush()).map_err(|e| CliError::Io("output".into(), e))
}

pub fn write_csv(out: Option<&Path>, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(sink(out)?);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush().map_err(|e| CliError::Io("output".into(), e))
}
