//! JSON schema for triangular records and dense matrices.
//!
//! A complex scalar is a two-element array `[re, im]`. A 4×4 record is an
//! object with keys `omega` (4 scalars), `alpha` (3), `beta` (2) and `gamma`
//! (one scalar); a 3×3 record has `omega` (3), `alpha` (2) and `beta` (one
//! scalar). A dense matrix is `{"dense": [[[re, im], ...], ...]}` in row-major
//! order. Unknown keys are rejected.

use serde_json::{Map, Value};

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::scalar::{ComplexScalar, ZERO};
use crate::tri::{TriMatrix3, TriMatrix4};

#[derive(Debug, Clone, PartialEq)]
pub enum Record {
    Tri3(TriMatrix3),
    Tri4(TriMatrix4),
}

impl Record {
    pub fn to_dense(&self) -> DenseMatrix {
        match self {
            Record::Tri3(t) => t.to_dense(),
            Record::Tri4(t) => t.to_dense(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Record::Tri3(_) => 3,
            Record::Tri4(_) => 4,
        }
    }
}

/// Anything the `norm` command accepts.
#[derive(Debug, Clone, PartialEq)]
pub enum MatrixDocument {
    Record(Record),
    Dense(DenseMatrix),
}

impl MatrixDocument {
    pub fn to_dense(&self) -> DenseMatrix {
        match self {
            MatrixDocument::Record(r) => r.to_dense(),
            MatrixDocument::Dense(m) => m.clone(),
        }
    }
}

/// Parses a complete 3×3 or 4×4 record; the size follows the length of
/// `omega`.
pub fn parse_matrix(text: &str) -> Result<Record> {
    parse_record(&parse_object(text)?, true)
}

/// Like [`parse_matrix`], but the corner entry (`gamma` or the 3×3 `beta`)
/// may be omitted, in which case it is zero.
pub fn parse_matrix_without_corner(text: &str) -> Result<Record> {
    parse_record(&parse_object(text)?, false)
}

/// Parses a record or a `{"dense": ...}` document.
pub fn parse_document(text: &str) -> Result<MatrixDocument> {
    let obj = parse_object(text)?;
    if obj.contains_key("dense") {
        if let Some(extra) = obj.keys().find(|k| *k != "dense") {
            return Err(Error::parse(extra.as_str(), "unexpected key next to `dense`"));
        }
        return parse_dense_rows(&obj["dense"]).map(MatrixDocument::Dense);
    }
    parse_record(&obj, true).map(MatrixDocument::Record)
}

fn parse_object(text: &str) -> Result<Map<String, Value>> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| Error::parse("<document>", e.to_string()))?;
    match value {
        Value::Object(map) => Ok(map),
        _ => Err(Error::parse("<document>", "expected a JSON object")),
    }
}

fn parse_record(obj: &Map<String, Value>, require_corner: bool) -> Result<Record> {
    let omega = obj
        .get("omega")
        .ok_or_else(|| Error::parse("omega", "missing"))?;
    let size = match omega {
        Value::Array(items) if items.len() == 4 => 4,
        Value::Array(items) if items.len() == 3 => 3,
        Value::Array(items) => {
            return Err(Error::parse(
                "omega",
                format!("expected 3 or 4 entries, found {}", items.len()),
            ))
        }
        _ => return Err(Error::parse("omega", "expected an array")),
    };
    let allowed: &[&str] = if size == 4 {
        &["omega", "alpha", "beta", "gamma"]
    } else {
        &["omega", "alpha", "beta"]
    };
    if let Some(extra) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(Error::parse(
            extra.as_str(),
            format!("unexpected key for a {size}x{size} record"),
        ));
    }

    if size == 4 {
        let omega = scalar_array::<4>(obj, "omega")?;
        let alpha = scalar_array::<3>(obj, "alpha")?;
        let beta = scalar_array::<2>(obj, "beta")?;
        let gamma = match obj.get("gamma") {
            Some(v) => scalar(v, "gamma")?,
            None if !require_corner => ZERO,
            None => return Err(Error::parse("gamma", "missing")),
        };
        Ok(Record::Tri4(TriMatrix4 {
            omega,
            alpha,
            beta,
            gamma,
        }))
    } else {
        let omega = scalar_array::<3>(obj, "omega")?;
        let alpha = scalar_array::<2>(obj, "alpha")?;
        let beta = match obj.get("beta") {
            Some(v) => corner_3x3(v)?,
            None if !require_corner => ZERO,
            None => return Err(Error::parse("beta", "missing")),
        };
        Ok(Record::Tri3(TriMatrix3 { omega, alpha, beta }))
    }
}

/// The 3×3 corner is canonically a bare scalar; a one-element array is also
/// accepted.
fn corner_3x3(v: &Value) -> Result<ComplexScalar> {
    match v {
        Value::Array(items) if items.len() == 1 && items[0].is_array() => scalar(&items[0], "beta[0]"),
        _ => scalar(v, "beta"),
    }
}

fn scalar_array<const N: usize>(obj: &Map<String, Value>, key: &str) -> Result<[ComplexScalar; N]> {
    let items = match obj.get(key) {
        Some(Value::Array(items)) => items,
        Some(_) => return Err(Error::parse(key, "expected an array of [re, im] pairs")),
        None => return Err(Error::parse(key, "missing")),
    };
    if items.len() != N {
        return Err(Error::parse(
            key,
            format!("expected {N} entries, found {}", items.len()),
        ));
    }
    let mut out = [ZERO; N];
    for (i, item) in items.iter().enumerate() {
        out[i] = scalar(item, &format!("{key}[{i}]"))?;
    }
    Ok(out)
}

fn scalar(v: &Value, field: &str) -> Result<ComplexScalar> {
    match v {
        Value::Array(pair) if pair.len() == 2 => Ok(ComplexScalar::new(
            real(&pair[0], field)?,
            real(&pair[1], field)?,
        )),
        _ => Err(Error::parse(field, "expected [re, im]")),
    }
}

fn real(v: &Value, field: &str) -> Result<f64> {
    match v {
        // Parse the literal ourselves so that overflow surfaces as a range
        // error instead of a generic syntax error.
        Value::Number(n) => {
            let x: f64 = n
                .to_string()
                .parse()
                .map_err(|_| Error::parse(field, format!("unreadable number {n}")))?;
            if x.is_finite() {
                Ok(x)
            } else {
                Err(Error::range(field))
            }
        }
        _ => Err(Error::parse(field, "expected a number")),
    }
}

fn parse_dense_rows(v: &Value) -> Result<DenseMatrix> {
    let rows = match v {
        Value::Array(rows) if !rows.is_empty() => rows,
        _ => return Err(Error::parse("dense", "expected a non-empty array of rows")),
    };
    let mut cols = None;
    let mut entries = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let items = match row {
            Value::Array(items) if !items.is_empty() => items,
            _ => return Err(Error::parse(format!("dense[{i}]"), "expected a non-empty row")),
        };
        match cols {
            None => cols = Some(items.len()),
            Some(c) if c != items.len() => {
                return Err(Error::parse(
                    format!("dense[{i}]"),
                    format!("row has {} entries, expected {c}", items.len()),
                ))
            }
            _ => {}
        }
        for (j, item) in items.iter().enumerate() {
            entries.push(scalar(item, &format!("dense[{i}][{j}]"))?);
        }
    }
    DenseMatrix::from_row_major(rows.len(), cols.unwrap_or(0), entries)
}

fn scalar_value(z: ComplexScalar) -> Value {
    // adding 0.0 turns -0.0 into 0.0, keeping the output canonical
    Value::Array(vec![Value::from(z.re + 0.0), Value::from(z.im + 0.0)])
}

fn scalars_value(zs: &[ComplexScalar]) -> Value {
    Value::Array(zs.iter().copied().map(scalar_value).collect())
}

pub fn record_value(r: &Record) -> Value {
    let mut map = Map::new();
    match r {
        Record::Tri4(t) => {
            map.insert("omega".into(), scalars_value(&t.omega));
            map.insert("alpha".into(), scalars_value(&t.alpha));
            map.insert("beta".into(), scalars_value(&t.beta));
            map.insert("gamma".into(), scalar_value(t.gamma));
        }
        Record::Tri3(t) => {
            map.insert("omega".into(), scalars_value(&t.omega));
            map.insert("alpha".into(), scalars_value(&t.alpha));
            map.insert("beta".into(), scalar_value(t.beta));
        }
    }
    Value::Object(map)
}

/// Canonical compact serialisation (keys sorted).
pub fn to_json(r: &Record) -> String {
    record_value(r).to_string()
}

pub fn dense_value(m: &DenseMatrix) -> Value {
    let rows = (0..m.rows())
        .map(|i| scalars_value(m.row(i)))
        .collect::<Vec<_>>();
    let mut map = Map::new();
    map.insert("dense".into(), Value::Array(rows));
    Value::Object(map)
}
