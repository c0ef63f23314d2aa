//! Helpers for reading and writing exact values in JSON documents.

use serde_json::Value;

use crate::algebra::rational::fmt_q;
use crate::algebra::{parse_rational, QMatrix, Q};
use crate::error::{Error, Result};

pub fn parse_document(src: &str) -> Result<Value> {
    serde_json::from_str(src).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// A rational given as a JSON integer or as a string such as `"-3/4"`.
pub fn q_from_value(v: &Value) -> Result<Q> {
    match v {
        Value::Number(n) => n.as_i64().map(crate::algebra::q).ok_or_else(|| {
            Error::Precondition(format!("{n} is not an exact integer; use a string"))
        }),
        Value::String(s) => parse_rational(s),
        other => Err(Error::Precondition(format!(
            "expected a rational, got {other}"
        ))),
    }
}

pub fn q_to_value(c: &Q) -> Value {
    if c.is_integer() {
        if let Ok(i) = c.to_integer().to_string().parse::<i64>() {
            return Value::from(i);
        }
    }
    Value::String(fmt_q(c))
}

pub fn vector_from_value(v: &Value) -> Result<Vec<Q>> {
    v.as_array()
        .ok_or_else(|| Error::Precondition("expected an array of rationals".into()))?
        .iter()
        .map(q_from_value)
        .collect()
}

/// A matrix as a list of rows with the given shape; `[]` is accepted for
/// matrices with no rows.
pub fn matrix_from_value(v: &Value, rows: usize, cols: usize) -> Result<QMatrix> {
    let rs = v
        .as_array()
        .ok_or_else(|| Error::Precondition("expected a matrix (list of rows)".into()))?;
    if rs.len() != rows {
        return Err(Error::Precondition(format!(
            "expected {rows} rows, got {}",
            rs.len()
        )));
    }
    let mut m = QMatrix::zeros(rows, cols);
    for (i, r) in rs.iter().enumerate() {
        let row = vector_from_value(r)?;
        if row.len() != cols {
            return Err(Error::Precondition(format!(
                "row {i} has {} entries, expected {cols}",
                row.len()
            )));
        }
        for (j, x) in row.into_iter().enumerate() {
            m.set(i, j, x);
        }
    }
    Ok(m)
}

pub fn matrix_to_value(m: &QMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(q_to_value).collect()))
            .collect(),
    )
}
