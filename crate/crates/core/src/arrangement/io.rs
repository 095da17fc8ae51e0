//! JSON persistence for arrangements and t-vector records.
//!
//! Arrangement: `{"field": {...}, "lines": [[c0, c1, c2], ...]}`.
//! Record: `{"label": str, "s": int, "t": {"k": int, ...}}` with optional
//! boolean `"real"` and `"supersolvable"` annotations.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Map, Value};

use super::{Arrangement, ArrangementError, TVector, TVectorRecord};
use crate::projective::ProjLine;
use crate::scalar::FieldDescriptor;

/// Documents above this size are rejected before parsing.
pub const MAX_DOCUMENT_BYTES: usize = 8 << 20;

#[derive(Clone, Copy, Debug, Default)]
pub struct LoadOptions {
    /// Accept records that violate the combinatorial identity.
    pub allow_unchecked: bool,
}

#[derive(Clone, Debug)]
pub enum Document {
    Arrangement(Arrangement),
    Record(TVectorRecord),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrangementFile {
    field: FieldDescriptor,
    lines: Vec<Vec<Value>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RecordFile {
    label: String,
    s: u64,
    t: BTreeMap<String, u64>,
    #[serde(default)]
    real: Option<bool>,
    #[serde(default)]
    supersolvable: Option<bool>,
}

fn schema(e: impl std::fmt::Display) -> ArrangementError {
    ArrangementError::Schema(e.to_string())
}

fn parse_multiplicity(key: &str) -> Result<u64, ArrangementError> {
    let canonical = !key.is_empty()
        && key.bytes().all(|b| b.is_ascii_digit())
        && !(key.len() > 1 && key.starts_with('0'));
    if !canonical {
        return Err(schema(format!("multiplicity key {key:?} is not a decimal integer")));
    }
    key.parse().map_err(schema)
}

fn arrangement_from_file(file: ArrangementFile) -> Result<Arrangement, ArrangementError> {
    let field = file.field;
    let mut lines = Vec::with_capacity(file.lines.len());
    for (i, coeffs) in file.lines.iter().enumerate() {
        if coeffs.len() != 3 {
            return Err(schema(format!("line {i} has {} coefficients, expected 3", coeffs.len())));
        }
        let c = [
            field.element_from_json(&coeffs[0])?,
            field.element_from_json(&coeffs[1])?,
            field.element_from_json(&coeffs[2])?,
        ];
        lines.push(ProjLine::new(c)?);
    }
    Arrangement::new(field, lines)
}

fn record_from_file(file: RecordFile, opts: LoadOptions) -> Result<TVectorRecord, ArrangementError> {
    let mut t = TVector::new();
    for (key, count) in &file.t {
        t.add(parse_multiplicity(key)?, *count);
    }
    let record =
        TVectorRecord { label: file.label, s: file.s, t, real: file.real, supersolvable: file.supersolvable };
    record.validate()?;
    if !opts.allow_unchecked {
        record.check_identity()?;
    }
    Ok(record)
}

/// Parse either document kind; the presence of `"lines"` selects an arrangement.
pub fn parse_document(text: &str, opts: LoadOptions) -> Result<Document, ArrangementError> {
    if text.len() > MAX_DOCUMENT_BYTES {
        return Err(schema(format!("document exceeds {MAX_DOCUMENT_BYTES} bytes")));
    }
    let value: Value = serde_json::from_str(text).map_err(schema)?;
    let obj = value.as_object().ok_or_else(|| schema("top level must be an object"))?;
    if obj.contains_key("lines") {
        let file: ArrangementFile = serde_json::from_value(value).map_err(schema)?;
        arrangement_from_file(file).map(Document::Arrangement)
    } else {
        let file: RecordFile = serde_json::from_value(value).map_err(schema)?;
        record_from_file(file, opts).map(Document::Record)
    }
}

pub fn load(path: impl AsRef<Path>, opts: LoadOptions) -> Result<Document, ArrangementError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)
        .map_err(|e| ArrangementError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_document(&text, opts)
}

impl Arrangement {
    pub fn to_json(&self) -> Value {
        let lines: Vec<Value> = self
            .lines()
            .iter()
            .map(|l| Value::Array(l.coords().iter().map(|c| c.to_json()).collect()))
            .collect();
        json!({ "field": self.field(), "lines": lines })
    }
}

impl TVectorRecord {
    pub fn to_json(&self) -> Value {
        let t: Map<String, Value> = self.t.iter().map(|(k, v)| (k.to_string(), Value::from(v))).collect();
        let mut obj = Map::new();
        obj.insert("label".into(), Value::from(self.label.clone()));
        obj.insert("s".into(), Value::from(self.s));
        obj.insert("t".into(), Value::Object(t));
        if let Some(r) = self.real {
            obj.insert("real".into(), Value::from(r));
        }
        if let Some(ss) = self.supersolvable {
            obj.insert("supersolvable".into(), Value::from(ss));
        }
        Value::Object(obj)
    }
}

impl Document {
    pub fn to_json(&self) -> Value {
        match self {
            Document::Arrangement(a) => a.to_json(),
            Document::Record(r) => r.to_json(),
        }
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("json values serialize");
        s.push('\n');
        s
    }
}

pub fn save(doc: &Document, path: impl AsRef<Path>) -> Result<(), ArrangementError> {
    let path = path.as_ref();
    fs::write(path, doc.to_json_string())
        .map_err(|e| ArrangementError::Io { path: path.display().to_string(), message: e.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(text: &str) -> Result<TVectorRecord, ArrangementError> {
        match parse_document(text, LoadOptions::default())? {
            Document::Record(r) => Ok(r),
            Document::Arrangement(_) => panic!("expected a record"),
        }
    }

    #[test]
    fn klein_and_wiman_records() {
        let klein = record(r#"{"label":"klein","s":21,"t":{"3":28,"4":21}}"#).unwrap();
        assert_eq!(klein.t, TVector::from_pairs([(3, 28), (4, 21)]));
        let wiman = record(r#"{"label":"wiman","s":45,"t":{"3":120,"4":45,"5":36}}"#).unwrap();
        assert_eq!(wiman.s, 45);
        assert_eq!(wiman.t.crossings(), 201);
    }

    #[test]
    fn identity_gate_and_override() {
        let text = r#"{"label":"bad","s":21,"t":{"3":28,"4":20}}"#;
        assert!(matches!(record(text), Err(ArrangementError::IdentityViolated { .. })));
        let doc = parse_document(text, LoadOptions { allow_unchecked: true }).unwrap();
        assert!(matches!(doc, Document::Record(_)));
    }

    #[test]
    fn schema_violations() {
        for bad in [
            "[]",
            "{}",
            r#"{"label":"x","s":3,"t":{"02":3}}"#,
            r#"{"label":"x","s":3,"t":{"two":3}}"#,
            r#"{"label":"x","s":3,"t":{"2":3},"extra":1}"#,
            r#"{"field":{"kind":"prime","p":4},"lines":[[1,0,0],[0,1,0]]}"#,
            r#"{"field":{"kind":"rational"},"lines":[["1","0"],["0","1","0"]]}"#,
            r#"{"field":{"kind":"rational"},"lines":[["1","0","0"],["2/4","1","0"]]}"#,
            r#"{"field":{"kind":"rational"},"lines":[["1","0","0"],["2","0","0"]]}"#,
            r#"{"field":{"kind":"rational"},"lines":[["0","0","0"],["1","0","0"]]}"#,
            r#"{"field":{"kind":"prime","p":3},"lines":[[1,0,0],[0,3,0]]}"#,
        ] {
            assert!(parse_document(bad, LoadOptions::default()).is_err(), "accepted {bad}");
        }
    }

    #[test]
    fn arrangement_round_trip() {
        let text = r#"{"field":{"kind":"cyclotomic","order":3},"lines":[[["1","0"],["0","0"],["0","0"]],[["2","0"],["0","-2"],["0","0"]]]}"#;
        let doc = parse_document(text, LoadOptions::default()).unwrap();
        let Document::Arrangement(a) = &doc else { panic!() };
        assert_eq!(a.len(), 2);
        // second line is rescaled to canonical form
        assert_eq!(a.lines()[1].coords()[1].to_json(), json!(["0", "-1"]));
        let again = parse_document(&doc.to_json_string(), LoadOptions::default()).unwrap();
        assert_eq!(again.to_json(), doc.to_json());
    }
}
