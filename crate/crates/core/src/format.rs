//! The form file format.
//!
//! A JSON document with fields `arity`, `dims` and `entries`, where each entry
//! is `[[i_1, …, i_m], coefficient]` with 1-based indices, sorted
//! lexicographically, no zero coefficients. [`serialize_form`] emits one
//! canonical byte layout, so the digest of a form is well defined.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::tensor::CoeffTensor;

/// Serde mirror of the form document, used when a form is embedded in
/// another document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormDoc {
    pub arity: usize,
    pub dims: Vec<usize>,
    pub entries: Vec<(Vec<usize>, i64)>,
}

impl From<&CoeffTensor> for FormDoc {
    fn from(t: &CoeffTensor) -> Self {
        FormDoc {
            arity: t.arity(),
            dims: t.dims().to_vec(),
            entries: t
                .entries()
                .map(|(i, c)| (i.as_slice().to_vec(), c))
                .collect(),
        }
    }
}

impl TryFrom<FormDoc> for CoeffTensor {
    type Error = Error;

    fn try_from(doc: FormDoc) -> Result<Self> {
        if doc.arity != doc.dims.len() {
            return Err(Error::Parse(format!(
                "arity {} disagrees with {} dims",
                doc.arity,
                doc.dims.len()
            )));
        }
        for w in doc.entries.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::Parse(format!(
                    "entries not strictly sorted at {:?}",
                    w[1].0
                )));
            }
        }
        if let Some((idx, _)) = doc.entries.iter().find(|(_, c)| *c == 0) {
            return Err(Error::Parse(format!("zero coefficient stored at {idx:?}")));
        }
        CoeffTensor::from_entries(doc.dims, doc.entries).map_err(|e| Error::Parse(e.to_string()))
    }
}

fn write_list(out: &mut String, v: &[usize]) {
    out.push('[');
    for (k, x) in v.iter().enumerate() {
        if k > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{x}");
    }
    out.push(']');
}

/// Canonical text of a form, one entry per line.
pub fn serialize_form(t: &CoeffTensor) -> String {
    let mut out = String::with_capacity(32 + t.nonzero_count() * (8 + 4 * t.arity()));
    let _ = writeln!(out, "{{");
    let _ = writeln!(out, "  \"arity\": {},", t.arity());
    out.push_str("  \"dims\": ");
    write_list(&mut out, t.dims());
    out.push_str(",\n");
    if t.is_zero() {
        out.push_str("  \"entries\": []\n}\n");
        return out;
    }
    out.push_str("  \"entries\": [\n");
    let n = t.nonzero_count();
    for (k, (idx, c)) in t.entries().enumerate() {
        out.push_str("    [");
        write_list(&mut out, idx.as_slice());
        let _ = write!(out, ", {c}]");
        out.push_str(if k + 1 < n { ",\n" } else { "\n" });
    }
    out.push_str("  ]\n}\n");
    out
}

pub fn parse_form(text: &str) -> Result<CoeffTensor> {
    let doc: FormDoc = serde_json::from_str(text)?;
    CoeffTensor::try_from(doc)
}

/// Hex SHA-256 of the canonical serialization.
pub fn form_digest(t: &CoeffTensor) -> String {
    let digest = Sha256::digest(serialize_form(t).as_bytes());
    format!("sha256:{}", hex::encode(digest))
}

pub fn read_form(path: &std::path::Path) -> Result<CoeffTensor> {
    parse_form(&std::fs::read_to_string(path)?)
}

pub fn write_form(path: &std::path::Path, t: &CoeffTensor) -> Result<()> {
    std::fs::write(path, serialize_form(t))?;
    Ok(())
}

/// Pretty JSON with arrays of scalars kept on one line.
pub fn to_document<T: serde::Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("documents serialize to JSON");
    let mut out = String::new();
    write_value(&mut out, &v, 0);
    out.push('\n');
    out
}

fn is_flat(v: &serde_json::Value) -> bool {
    match v {
        serde_json::Value::Array(a) => a
            .iter()
            .all(|x| !x.is_object() && (!x.is_array() || is_flat(x))),
        serde_json::Value::Object(_) => false,
        _ => true,
    }
}

fn write_value(out: &mut String, v: &serde_json::Value, depth: usize) {
    use serde_json::Value;
    let pad = |out: &mut String, d: usize| out.push_str(&"  ".repeat(d));
    match v {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (k, (key, val)) in map.iter().enumerate() {
                pad(out, depth + 1);
                out.push_str(&serde_json::to_string(key).expect("string key"));
                out.push_str(": ");
                write_value(out, val, depth + 1);
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push('}');
        }
        Value::Array(items) if !is_flat(v) => {
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                pad(out, depth + 1);
                write_value(out, item, depth + 1);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push(']');
        }
        Value::Array(items) if items.iter().any(|x| x.is_array()) => {
            // array of flat arrays: one inner array per line
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                pad(out, depth + 1);
                out.push_str(&inline(item));
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push(']');
        }
        other => out.push_str(&inline(other)),
    }
}

fn inline(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(inline).collect();
            format!("[{}]", parts.join(", "))
        }
        other => serde_json::to_string(other).expect("scalar serializes"),
    }
}
