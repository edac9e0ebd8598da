//! Output plumbing: 17-significant-digit JSON, CSV matrices, exit codes.

use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use dirichlet_bidisc::{Complex, Error};
use nalgebra::DMatrix;
use serde_json::{Number, Value};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid arguments: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{context}{err}")]
    Core { context: String, err: Error },
}

impl CliError {
    pub fn core(context: impl Into<String>) -> impl FnOnce(Error) -> Self {
        let context = context.into();
        move |err| CliError::Core { context: if context.is_empty() { context } else { format!("{context}: ") }, err }
    }

    /// 1 contract failure, 2 parse/usage, 3 ill-conditioned, 4 inconsistent
    /// moments, 5 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Core { err, .. } => match err {
                Error::Parse(_) | Error::Domain(_) => 2,
                Error::IllConditioned(_) => 3,
                Error::InconsistentMoments(_) => 4,
                Error::SplittingViolated(_) | Error::NotPositive(_) => 1,
                _ => 5,
            },
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        CliError::Core { context: String::new(), err }
    }
}

pub fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

/// `x` with 17 significant digits; non-finite values become `null`.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Value::Number(Number::from_str(&format!("{x:.16e}")).expect("formatted float is a JSON number"))
}

pub fn cnum(z: Complex<f64>) -> Value {
    Value::Array(vec![num(z.re), num(z.im)])
}

/// Rewrites every non-integer number in `v` to 17 significant digits.
pub fn normalise(v: Value) -> Value {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => num(n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(a) => Value::Array(a.into_iter().map(normalise).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, normalise(v))).collect()),
        other => other,
    }
}

pub fn csv_matrix(m: &DMatrix<Complex<f64>>) -> String {
    let mut out = String::new();
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .map(|j| format!("{:.16e},{:.16e}", m[(i, j)].re + 0.0, m[(i, j)].im + 0.0))
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn pretty(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&normalise(v)).expect("report serializes");
    s.push('\n');
    s
}

/// One compact JSON document per line.
pub fn lines(records: Vec<Value>) -> String {
    records.into_iter().map(|r| serde_json::to_string(&normalise(r)).expect("record serializes") + "\n").collect()
}

pub fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io { path: p.display().to_string(), source }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}
