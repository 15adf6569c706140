//! JSON file formats for matrices, phase parameters and computed results.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::Config;
use crate::hadamard::{HadamardMatrix, Provenance};
use crate::matrix::{ComplexMatrix, C64};
use crate::phases::{PhaseParameterMatrix, PhaseSource};
use crate::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
struct MatrixFile {
    n: usize,
    entries: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct PhaseFile {
    m: usize,
    n: usize,
    angles: Vec<Vec<f64>>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

fn format_err(path: &Path, message: impl Into<String>) -> Error {
    Error::Format {
        path: path.to_owned(),
        message: message.into(),
    }
}

/// Parses `{ "n": N, "entries": [[[re, im], ...], ...] }`.
pub fn parse_matrix_json(text: &str, path: &Path) -> Result<ComplexMatrix> {
    let file: MatrixFile = serde_json::from_str(text).map_err(|e| format_err(path, e.to_string()))?;
    if file.n == 0 {
        return Err(format_err(path, "n must be positive"));
    }
    if file.entries.len() != file.n {
        return Err(format_err(path, format!("expected {} rows, found {}", file.n, file.entries.len())));
    }
    let mut entries = Vec::with_capacity(file.n * file.n);
    for (i, row) in file.entries.iter().enumerate() {
        if row.len() != file.n {
            return Err(format_err(path, format!("row {i} has {} entries, expected {}", row.len(), file.n)));
        }
        entries.extend(row.iter().map(|&[re, im]| C64::new(re, im)));
    }
    ComplexMatrix::new(file.n, file.n, entries)
}

pub fn matrix_to_json(m: &ComplexMatrix) -> Result<String> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let file = MatrixFile {
        n: m.rows(),
        entries: (0..m.rows())
            .map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect())
            .collect(),
    };
    Ok(serde_json::to_string(&file).expect("matrix serializes"))
}

/// Loads and validates a Hadamard matrix file.
pub fn load_hadamard(path: &Path, config: &Config) -> Result<HadamardMatrix> {
    let m = parse_matrix_json(&read(path)?, path)?;
    HadamardMatrix::with_config(m, Provenance::File(path.to_owned()), config)
}

/// Loads a matrix file without checking the Hadamard conditions.
pub fn load_matrix(path: &Path) -> Result<ComplexMatrix> {
    parse_matrix_json(&read(path)?, path)
}

pub fn write_matrix(path: &Path, m: &ComplexMatrix) -> Result<()> {
    fs::write(path, matrix_to_json(m)?).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

/// Parses `{ "m": M, "n": N, "angles": [[θ, ...], ...] }`.
pub fn parse_phase_json(text: &str, path: &Path) -> Result<PhaseParameterMatrix> {
    let file: PhaseFile = serde_json::from_str(text).map_err(|e| format_err(path, e.to_string()))?;
    if file.angles.len() != file.m || file.angles.iter().any(|row| row.len() != file.n) {
        return Err(format_err(path, format!("angles must form a {}x{} array", file.m, file.n)));
    }
    PhaseParameterMatrix::from_angles(
        file.m,
        file.n,
        file.angles.into_iter().flatten().collect(),
        PhaseSource::File(path.to_owned()),
    )
}

pub fn load_phases(path: &Path) -> Result<PhaseParameterMatrix> {
    parse_phase_json(&read(path)?, path)
}

pub fn phases_to_json(q: &PhaseParameterMatrix) -> String {
    let file = PhaseFile {
        m: q.m(),
        n: q.n(),
        angles: (0..q.m()).map(|i| (0..q.n()).map(|b| q.angle(i, b)).collect()).collect(),
    };
    serde_json::to_string(&file).expect("phases serialize")
}

/// Rounds to 15 significant digits.
pub fn sig15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().expect("formatted float parses")
}

/// Applies [`sig15`] to every number in a JSON tree; integers are untouched.
pub fn round_json(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => serde_json::Number::from_f64(sig15(n.as_f64().unwrap()))
            .map(Value::Number)
            .unwrap_or(Value::Null),
        Value::Array(items) => Value::Array(items.into_iter().map(round_json).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}

/// Serializes a result with 15 significant digits.
pub fn to_json_15<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("result serializes");
    serde_json::to_string_pretty(&round_json(v)).expect("json value serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hadamard::fourier;

    #[test]
    fn matrix_json_roundtrip_is_bit_exact() {
        let f = fourier(5).unwrap();
        let text = matrix_to_json(f.matrix()).unwrap();
        let back = parse_matrix_json(&text, Path::new("mem")).unwrap();
        assert_eq!(&back, f.matrix());
    }

    #[test]
    fn rejects_ragged_and_wrong_n() {
        let p = Path::new("mem");
        assert!(parse_matrix_json(r#"{"n":2,"entries":[[[1,0],[1,0]]]}"#, p).is_err());
        assert!(parse_matrix_json(r#"{"n":2,"entries":[[[1,0],[1,0]],[[1,0]]]}"#, p).is_err());
        assert!(parse_matrix_json(r#"{"n":1,"entries":[[[1,0,3]]]}"#, p).is_err());
        assert!(parse_matrix_json(r#"{"n":1,"entries":[[[1,0]]]}"#, p).is_ok());
    }

    #[test]
    fn phase_json() {
        let p = Path::new("mem");
        let q = parse_phase_json(r#"{"m":1,"n":2,"angles":[[0.0, 3.141592653589793]]}"#, p).unwrap();
        assert!((q.get(0, 1) + 1.0).norm() < 1e-15);
        assert!(parse_phase_json(r#"{"m":2,"n":2,"angles":[[0.0, 1.0]]}"#, p).is_err());
        let text = phases_to_json(&q);
        assert_eq!(parse_phase_json(&text, p).unwrap().angles(), q.angles());
    }

    #[test]
    fn fifteen_digits() {
        assert_eq!(sig15(1.0 / 3.0), 0.333333333333333);
        assert_eq!(sig15(0.0), 0.0);
        let v = round_json(serde_json::json!({"a": [2.0f64 / 3.0, 4], "b": 7}));
        assert_eq!(v.to_string(), r#"{"a":[0.666666666666667,4],"b":7}"#);
    }
}
