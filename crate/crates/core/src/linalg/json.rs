//! Matrix JSON: `{"rows":R,"cols":C,"entries":[[...],...]}`.
//!
//! GF(p) entries are integers in `[0, p)`; rational entries are integers or
//! `"num/den"` strings. The field is not part of the matrix document; it comes
//! from the enclosing document.

use serde_json::{json, Value};

use super::{Field, FieldDesc, LinalgError, Mat};

pub fn mat_to_json<F: Field>(m: &Mat<F>) -> Value {
    let entries: Vec<Value> = (0..m.rows())
        .map(|i| Value::Array(m.row_slice(i).iter().map(|x| m.field().elem_to_json(x)).collect()))
        .collect();
    json!({ "rows": m.rows(), "cols": m.cols(), "entries": entries })
}

pub fn mat_from_json<F: Field>(field: &F, v: &Value) -> Result<Mat<F>, LinalgError> {
    let rows = usize_field(v, "rows")?;
    let cols = usize_field(v, "cols")?;
    let entries = v
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| LinalgError::Parse("matrix needs an \"entries\" array".into()))?;
    if entries.len() != rows {
        return Err(LinalgError::Shape(format!("{} entry rows for {rows} rows", entries.len())));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for row in entries {
        let row = row
            .as_array()
            .ok_or_else(|| LinalgError::Parse("matrix rows must be arrays".into()))?;
        if row.len() != cols {
            return Err(LinalgError::Shape(format!("row of length {} for {cols} columns", row.len())));
        }
        for x in row {
            data.push(field.elem_from_json(x)?);
        }
    }
    Mat::new(field.clone(), rows, cols, data)
}

pub fn usize_field(v: &Value, key: &str) -> Result<usize, LinalgError> {
    v.get(key)
        .and_then(Value::as_u64)
        .map(|x| x as usize)
        .ok_or_else(|| LinalgError::Parse(format!("missing or invalid {key:?}")))
}

pub fn field_from_json(v: &Value) -> Result<FieldDesc, LinalgError> {
    match v.get("field") {
        Some(Value::String(s)) => s.parse(),
        Some(Value::Number(n)) => n
            .as_u64()
            .ok_or_else(|| LinalgError::Parse(format!("invalid field {n}")))?
            .to_string()
            .parse(),
        _ => Err(LinalgError::Parse("missing \"field\"".into())),
    }
}
