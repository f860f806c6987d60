//! JSON matrix files: `{"n": 3, "entries": [[4, 7, 2], [5, "1/2", 5], [6, 3, 1]]}`.

use std::fmt;

use serde_json::Value;

use crate::matrix::TropicalMatrix;
use crate::scalar::ExtScalar;

/// Why a matrix file was rejected. Entry-level problems name the 1-based
/// row and column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatrixFileError {
    Json(String),
    MissingField(&'static str),
    BadDimension(String),
    RowCount { n: usize, found: usize },
    RowLength { row: usize, n: usize, found: usize },
    NotARow { row: usize },
    BadEntry { row: usize, col: usize, reason: String },
}

impl fmt::Display for MatrixFileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixFileError::Json(e) => write!(f, "invalid JSON: {e}"),
            MatrixFileError::MissingField(name) => write!(f, "missing field `{name}`"),
            MatrixFileError::BadDimension(v) => write!(f, "`n` must be a positive integer, found {v}"),
            MatrixFileError::RowCount { n, found } => {
                write!(f, "n = {n} but `entries` has {found} rows")
            }
            MatrixFileError::RowLength { row, n, found } => {
                write!(f, "row {row}: expected {n} entries, found {found}")
            }
            MatrixFileError::NotARow { row } => write!(f, "row {row}: not an array"),
            MatrixFileError::BadEntry { row, col, reason } => {
                write!(f, "row {row}, column {col}: {reason}")
            }
        }
    }
}

impl std::error::Error for MatrixFileError {}

/// Parses and validates a problem matrix: `n >= 1`, `n` rows of `n`
/// entries, every entry a finite integer or `"num/den"` string.
pub fn parse_matrix(text: &str) -> Result<TropicalMatrix, MatrixFileError> {
    let root: Value = serde_json::from_str(text).map_err(|e| MatrixFileError::Json(e.to_string()))?;
    let n_val = root.get("n").ok_or(MatrixFileError::MissingField("n"))?;
    let n = n_val
        .as_u64()
        .filter(|&n| n >= 1)
        .ok_or_else(|| MatrixFileError::BadDimension(n_val.to_string()))? as usize;
    let rows = root
        .get("entries")
        .and_then(Value::as_array)
        .ok_or(MatrixFileError::MissingField("entries"))?;
    if rows.len() != n {
        return Err(MatrixFileError::RowCount { n, found: rows.len() });
    }
    let mut out = Vec::with_capacity(n);
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().ok_or(MatrixFileError::NotARow { row: i + 1 })?;
        if row.len() != n {
            return Err(MatrixFileError::RowLength {
                row: i + 1,
                n,
                found: row.len(),
            });
        }
        let parsed = row
            .iter()
            .enumerate()
            .map(|(j, v)| {
                parse_entry(v).map_err(|reason| MatrixFileError::BadEntry {
                    row: i + 1,
                    col: j + 1,
                    reason,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        out.push(parsed);
    }
    Ok(TropicalMatrix::from_rows(out).expect("validated square"))
}

fn parse_entry(v: &Value) -> Result<ExtScalar, String> {
    let x = match v {
        Value::Number(num) => match num.as_i64() {
            Some(i) => ExtScalar::int(i),
            None => return Err(format!("{num} is not an integer; write fractions as \"num/den\"")),
        },
        Value::String(s) => s.parse::<ExtScalar>().map_err(|e| e.to_string())?,
        other => return Err(format!("expected an integer or \"num/den\" string, found {other}")),
    };
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("entry {x} must be finite"))
    }
}

/// Serializes a matrix in the file format accepted by [`parse_matrix`].
pub fn write_matrix(a: &TropicalMatrix) -> String {
    serde_json::to_string(a).expect("matrix serializes")
}
