//! JSON algebra files.
//!
//! ```json
//! {
//!   "name": "M2(Q(i))",
//!   "dim": 8,
//!   "basis": ["E11", ...],
//!   "table": [[["1", "0", ...], ...], ...],
//!   "unit": ["1", "0", ...],
//!   "involution": [["1", "0", ...], ...],
//!   "idempotents": {"e": ["1", "0", ...]}
//! }
//! ```
//!
//! `table[i][j]` is the coordinate vector of `b_i b_j`. `involution` is a
//! `dim × dim` matrix whose column `j` is the image of `b_j`. Every scalar is a
//! rational string such as `"-3/4"`.

use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::algebra::{Element, StructureAlgebra};
use crate::linalg::RatMatrix;
use crate::rational::{ParseRationalError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FileError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("missing member at {path}")]
    Missing { path: String },
    #[error("expected {expected} at {path}")]
    Type { path: String, expected: &'static str },
    #[error("malformed rational {value:?} at {path}: {source}")]
    Rational { path: String, value: String, source: ParseRationalError },
    #[error("dimension mismatch at {path}: expected {expected}, got {got}")]
    Dimension { path: String, expected: usize, got: usize },
    #[error("validation failed: {axiom} at basis ({})", tuple.join(", "))]
    Axiom { axiom: &'static str, tuple: Vec<String> },
}

fn member<'v>(obj: &'v Map<String, Value>, key: &str) -> Result<&'v Value, FileError> {
    obj.get(key).ok_or_else(|| FileError::Missing { path: key.to_string() })
}

fn array<'v>(v: &'v Value, path: &str, len: Option<usize>) -> Result<&'v Vec<Value>, FileError> {
    let a = v.as_array().ok_or_else(|| FileError::Type { path: path.to_string(), expected: "array" })?;
    if let Some(n) = len {
        if a.len() != n {
            return Err(FileError::Dimension { path: path.to_string(), expected: n, got: a.len() });
        }
    }
    Ok(a)
}

fn rational(v: &Value, path: &str) -> Result<Rational, FileError> {
    let s = v.as_str().ok_or_else(|| FileError::Type { path: path.to_string(), expected: "rational string" })?;
    s.parse().map_err(|source| FileError::Rational { path: path.to_string(), value: s.to_string(), source })
}

fn vector(v: &Value, path: &str, dim: usize) -> Result<Vec<Rational>, FileError> {
    array(v, path, Some(dim))?
        .iter()
        .enumerate()
        .map(|(k, x)| rational(x, &format!("{path}[{k}]")))
        .collect()
}

/// Parses an algebra without checking its axioms.
pub fn load_algebra_str(text: &str) -> Result<StructureAlgebra, FileError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| FileError::Json(e.to_string()))?;
    let obj = doc.as_object().ok_or(FileError::Type { path: "$".into(), expected: "object" })?;

    let name = member(obj, "name")?
        .as_str()
        .ok_or(FileError::Type { path: "name".into(), expected: "string" })?
        .to_string();
    let dim = member(obj, "dim")?
        .as_u64()
        .filter(|&d| d > 0)
        .ok_or(FileError::Type { path: "dim".into(), expected: "positive integer" })? as usize;
    let basis = array(member(obj, "basis")?, "basis", Some(dim))?
        .iter()
        .enumerate()
        .map(|(k, b)| {
            b.as_str().map(str::to_string).ok_or(FileError::Type { path: format!("basis[{k}]"), expected: "string" })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut table = Vec::with_capacity(dim);
    for (i, row) in array(member(obj, "table")?, "table", Some(dim))?.iter().enumerate() {
        let path = format!("table[{i}]");
        let row = array(row, &path, Some(dim))?;
        table.push(
            row.iter()
                .enumerate()
                .map(|(j, entry)| vector(entry, &format!("{path}[{j}]"), dim))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }

    let unit = vector(member(obj, "unit")?, "unit", dim)?;

    let mut rows = Vec::with_capacity(dim);
    for (r, row) in array(member(obj, "involution")?, "involution", Some(dim))?.iter().enumerate() {
        rows.push(vector(row, &format!("involution[{r}]"), dim)?);
    }
    let involution = RatMatrix::from_rows(dim, rows).expect("shape checked");

    let mut alg = StructureAlgebra::new(name, basis, table, unit, involution).expect("shape checked");
    if let Some(idem) = obj.get("idempotents") {
        let map = idem.as_object().ok_or(FileError::Type { path: "idempotents".into(), expected: "object" })?;
        for (key, coords) in map {
            let v = vector(coords, &format!("idempotents.{key}"), dim)?;
            alg = alg.with_idempotent(key.clone(), Element::from_coords(v)).expect("length checked");
        }
    }
    Ok(alg)
}

/// Parses an algebra and requires it to pass validation.
pub fn parse_algebra_str(text: &str) -> Result<StructureAlgebra, FileError> {
    let alg = load_algebra_str(text)?;
    let report = alg.validate();
    if let Some(f) = report.first_failure() {
        return Err(FileError::Axiom {
            axiom: f.axiom.label(),
            tuple: f.tuple.iter().map(|&i| alg.basis_name(i).to_string()).collect(),
        });
    }
    Ok(alg)
}

fn read(path: &Path) -> Result<String, FileError> {
    fs::read_to_string(path).map_err(|e| FileError::Io { path: path.display().to_string(), message: e.to_string() })
}

pub fn load_algebra_file(path: &Path) -> Result<StructureAlgebra, FileError> {
    load_algebra_str(&read(path)?)
}

pub fn parse_algebra_file(path: &Path) -> Result<StructureAlgebra, FileError> {
    parse_algebra_str(&read(path)?)
}

pub fn rational_strings(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

pub fn algebra_to_json(alg: &StructureAlgebra) -> Value {
    let dim = alg.dim();
    let table: Vec<Value> = (0..dim)
        .map(|i| Value::Array((0..dim).map(|j| rational_strings(&alg.table_entry(i, j))).collect()))
        .collect();
    let sigma = alg.involution_matrix();
    let involution: Vec<Value> = (0..dim).map(|r| rational_strings(sigma.row(r))).collect();
    let mut doc = json!({
        "name": alg.name(),
        "dim": dim,
        "basis": alg.basis_names(),
        "table": table,
        "unit": rational_strings(alg.unit().coords()),
        "involution": involution,
    });
    if !alg.idempotents().is_empty() {
        let idem: Map<String, Value> =
            alg.idempotents().iter().map(|(k, e)| (k.clone(), rational_strings(e.coords()))).collect();
        doc["idempotents"] = Value::Object(idem);
    }
    doc
}

pub fn export_algebra(alg: &StructureAlgebra) -> String {
    let mut s = serde_json::to_string_pretty(&algebra_to_json(alg)).expect("serializable");
    s.push('\n');
    s
}
