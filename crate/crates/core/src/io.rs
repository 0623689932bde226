//! JSON manifold documents.
//!
//! ```json
//! { "name": "K3", "b1": 0, "b2plus": 3, "b2minus": 19, "lattice_rank": 1,
//!   "gram": [[0]], "lift": [0],
//!   "basic_classes": [{ "coords": [0], "sw": 1 }],
//!   "provenance": [] }
//! ```
//!
//! Integers are JSON numbers, or decimal strings when they do not fit 64 bits.

use std::collections::BTreeMap;
use std::path::Path;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::lattice::{validate_model, CharacteristicLift, CohClass, IntersectionLattice};
use crate::model::FourManifoldModel;
use crate::scalar::Int;

fn field<'a>(obj: &'a Map<String, Value>, path: &str, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::Parse(format!("{path}: missing field `{key}`")))
}

fn integer<I: Int>(v: &Value, path: &str) -> Result<I> {
    let text = match v {
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        Value::String(s) => s.trim().to_string(),
        other => {
            return Err(Error::Parse(format!(
                "{path}: expected an integer, found {other}"
            )))
        }
    };
    I::from_str_radix(&text, 10)
        .map_err(|_| Error::Parse(format!("{path}: `{text}` is not an integer")))
}

fn small<I: Int>(v: &Value, path: &str) -> Result<u32> {
    integer::<I>(v, path)?
        .to_u32()
        .ok_or_else(|| Error::Parse(format!("{path}: expected a non-negative 32-bit integer")))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("{path}: expected an array")))
}

fn vector<I: Int>(v: &Value, path: &str, len: usize) -> Result<Vec<I>> {
    let a = array(v, path)?;
    if a.len() != len {
        return Err(Error::Parse(format!(
            "{path}: expected {len} entries, found {}",
            a.len()
        )));
    }
    a.iter()
        .enumerate()
        .map(|(i, x)| integer(x, &format!("{path}[{i}]")))
        .collect()
}

/// Parses without running model validation.
pub fn parse_manifold_unchecked<I: Int>(text: &str) -> Result<FourManifoldModel<I>> {
    let doc: Value = serde_json::from_str(text).map_err(|e| {
        Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column()))
    })?;
    let obj = doc
        .as_object()
        .ok_or_else(|| Error::Parse("top level: expected an object".into()))?;
    let name = match field(obj, "top level", "name")? {
        Value::String(s) => s.clone(),
        _ => return Err(Error::Parse("name: expected a string".into())),
    };
    let b1 = small::<I>(field(obj, "top level", "b1")?, "b1")?;
    let b2plus = small::<I>(field(obj, "top level", "b2plus")?, "b2plus")?;
    let b2minus = small::<I>(field(obj, "top level", "b2minus")?, "b2minus")?;
    let rank = small::<I>(field(obj, "top level", "lattice_rank")?, "lattice_rank")? as usize;
    let rows = array(field(obj, "top level", "gram")?, "gram")?;
    if rows.len() != rank {
        return Err(Error::Parse(format!(
            "gram: expected {rank} rows, found {}",
            rows.len()
        )));
    }
    let gram = rows
        .iter()
        .enumerate()
        .map(|(i, r)| vector::<I>(r, &format!("gram[{i}]"), rank))
        .collect::<Result<Vec<_>>>()?;
    let lattice = IntersectionLattice::new(gram).map_err(|e| Error::Parse(format!("gram: {e}")))?;
    let lift = CohClass::new(vector::<I>(field(obj, "top level", "lift")?, "lift", rank)?);
    let mut basic_classes = BTreeMap::new();
    for (i, entry) in array(field(obj, "top level", "basic_classes")?, "basic_classes")?
        .iter()
        .enumerate()
    {
        let path = format!("basic_classes[{i}]");
        let e = entry
            .as_object()
            .ok_or_else(|| Error::Parse(format!("{path}: expected an object")))?;
        let coords = vector::<I>(field(e, &path, "coords")?, &format!("{path}.coords"), rank)?;
        let sw = integer::<I>(field(e, &path, "sw")?, &format!("{path}.sw"))?;
        if basic_classes.insert(CohClass::new(coords), sw).is_some() {
            return Err(Error::Parse(format!("{path}: duplicate class")));
        }
    }
    let provenance = match obj.get("provenance") {
        None => Vec::new(),
        Some(v) => array(v, "provenance")?
            .iter()
            .enumerate()
            .map(|(i, s)| {
                s.as_str()
                    .map(String::from)
                    .ok_or_else(|| Error::Parse(format!("provenance[{i}]: expected a string")))
            })
            .collect::<Result<_>>()?,
    };
    Ok(FourManifoldModel {
        name,
        b1,
        b2plus,
        b2minus,
        lattice,
        lift: CharacteristicLift::unchecked(lift),
        basic_classes,
        provenance,
    })
}

/// Parses and runs lenient validation.
pub fn parse_manifold<I: Int>(text: &str) -> Result<FourManifoldModel<I>> {
    let m = parse_manifold_unchecked(text)?;
    let report = validate_model(&m, false);
    if !report.is_ok() {
        return Err(Error::Validation(report));
    }
    Ok(m)
}

fn int_value<I: Int>(v: &I) -> Value {
    match v.to_i64() {
        Some(x) => Value::from(x),
        None => Value::String(v.to_string()),
    }
}

fn vec_value<I: Int>(v: &[I]) -> Value {
    Value::Array(v.iter().map(int_value).collect())
}

pub fn manifold_to_value<I: Int>(m: &FourManifoldModel<I>) -> Value {
    let mut o = Map::new();
    o.insert("name".into(), Value::from(m.name.clone()));
    o.insert("b1".into(), Value::from(m.b1));
    o.insert("b2plus".into(), Value::from(m.b2plus));
    o.insert("b2minus".into(), Value::from(m.b2minus));
    o.insert("lattice_rank".into(), Value::from(m.rank()));
    o.insert(
        "gram".into(),
        Value::Array(m.lattice.gram().iter().map(|r| vec_value(r)).collect()),
    );
    o.insert("lift".into(), vec_value(m.lift.upsilon.coords()));
    o.insert(
        "basic_classes".into(),
        Value::Array(
            m.basic_classes
                .iter()
                .map(|(x, sw)| {
                    let mut e = Map::new();
                    e.insert("coords".into(), vec_value(x.coords()));
                    e.insert("sw".into(), int_value(sw));
                    Value::Object(e)
                })
                .collect(),
        ),
    );
    o.insert(
        "provenance".into(),
        Value::Array(m.provenance.iter().cloned().map(Value::from).collect()),
    );
    Value::Object(o)
}

pub fn serialize_manifold<I: Int>(m: &FourManifoldModel<I>) -> String {
    let mut s = serde_json::to_string_pretty(&manifold_to_value(m)).expect("json");
    s.push('\n');
    s
}

pub fn read_manifold<I: Int>(path: &Path) -> Result<FourManifoldModel<I>> {
    let text = std::fs::read_to_string(path)?;
    parse_manifold(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn write_manifold<I: Int>(path: &Path, m: &FourManifoldModel<I>) -> Result<()> {
    std::fs::write(path, serialize_manifold(m))?;
    Ok(())
}
