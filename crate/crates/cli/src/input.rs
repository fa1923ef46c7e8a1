//! JSON input documents with exact rationals.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use tfk_core::divpol::{parse_rational, DivisorialPolytope, ProjPoint};
use tfk_core::exactgeom::{fmt_rat, AffineFn, Polytope, Rat, RatVec};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InputError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("{path}: {value:?} is not an exact rational number")]
    NonRationalNumber { path: String, value: String },
}

fn schema(path: &str, message: impl Into<String>) -> InputError {
    InputError::Schema {
        path: path.to_string(),
        message: message.into(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub point: ProjPoint,
    pub pieces: Vec<AffineFn>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputDocument {
    pub schema_version: String,
    pub box_vertices: Vec<RatVec>,
    pub entries: Vec<Entry>,
    pub kdiv: Option<Vec<(ProjPoint, BigInt)>>,
    pub precision: Option<u32>,
}

fn scalar(v: &Value, path: &str) -> Result<Rat, InputError> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        Value::Number(n) => {
            return Err(InputError::NonRationalNumber {
                path: path.to_string(),
                value: format!("{n} (quote decimals as strings)"),
            })
        }
        other => return Err(schema(path, format!("expected a rational, found {other}"))),
    };
    parse_rational(&text).ok_or(InputError::NonRationalNumber {
        path: path.to_string(),
        value: text,
    })
}

fn vector(v: &Value, path: &str) -> Result<RatVec, InputError> {
    let arr = v.as_array().ok_or_else(|| schema(path, "expected an array"))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| scalar(x, &format!("{path}[{i}]")))
        .collect::<Result<Vec<_>, _>>()
        .map(RatVec)
}

fn point(v: &Value, path: &str) -> Result<ProjPoint, InputError> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => return Err(schema(path, format!("expected a point, found {other}"))),
    };
    let p: ProjPoint = text.parse().map_err(|e| schema(path, format!("{e}")))?;
    if p.is_generic() {
        return Err(schema(path, "the generic point cannot carry a function"));
    }
    Ok(p)
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value, InputError> {
    obj.get(key).ok_or_else(|| schema(path, format!("missing field {key:?}")))
}

fn check_keys(obj: &Map<String, Value>, allowed: &[&str], path: &str) -> Result<(), InputError> {
    for k in obj.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(schema(path, format!("unknown field {k:?}")));
        }
    }
    Ok(())
}

/// Parse an input document.
pub fn parse_input(text: &str) -> Result<InputDocument, InputError> {
    let v: Value = serde_json::from_str(text).map_err(|e| InputError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let root = v.as_object().ok_or_else(|| schema("$", "expected an object"))?;
    check_keys(root, &["schema_version", "box", "entries", "kdiv", "precision"], "$")?;

    let schema_version = match root.get("schema_version") {
        None => SCHEMA_VERSION.to_string(),
        Some(Value::String(s)) => s.clone(),
        Some(_) => return Err(schema("schema_version", "expected a string")),
    };
    if schema_version != SCHEMA_VERSION {
        return Err(schema("schema_version", format!("unsupported version {schema_version:?}")));
    }

    let box_val = field(root, "box", "$")?
        .as_array()
        .ok_or_else(|| schema("box", "expected an array of vertices"))?;
    if box_val.is_empty() {
        return Err(schema("box", "no vertices"));
    }
    let box_vertices = box_val
        .iter()
        .enumerate()
        .map(|(i, x)| vector(x, &format!("box[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let d = box_vertices[0].dim();
    if d == 0 {
        return Err(schema("box[0]", "empty vertex"));
    }
    for (i, v) in box_vertices.iter().enumerate() {
        if v.dim() != d {
            return Err(schema(&format!("box[{i}]"), format!("expected {d} coordinates")));
        }
    }

    let mut entries = Vec::new();
    let mut seen = BTreeSet::new();
    let ents = field(root, "entries", "$")?
        .as_array()
        .ok_or_else(|| schema("entries", "expected an array"))?;
    for (i, e) in ents.iter().enumerate() {
        let path = format!("entries[{i}]");
        let obj = e.as_object().ok_or_else(|| schema(&path, "expected an object"))?;
        check_keys(obj, &["point", "pieces"], &path)?;
        let p = point(field(obj, "point", &path)?, &format!("{path}.point"))?;
        if !seen.insert(p.clone()) {
            return Err(schema(&format!("{path}.point"), format!("duplicate point {p}")));
        }
        let raw = field(obj, "pieces", &path)?
            .as_array()
            .ok_or_else(|| schema(&format!("{path}.pieces"), "expected an array"))?;
        if raw.is_empty() {
            return Err(schema(&format!("{path}.pieces"), "no pieces"));
        }
        let mut pieces = Vec::new();
        for (j, pc) in raw.iter().enumerate() {
            let pp = format!("{path}.pieces[{j}]");
            let o = pc.as_object().ok_or_else(|| schema(&pp, "expected an object"))?;
            check_keys(o, &["slope", "constant"], &pp)?;
            let slope = vector(field(o, "slope", &pp)?, &format!("{pp}.slope"))?;
            if slope.dim() != d {
                return Err(schema(&format!("{pp}.slope"), format!("expected {d} coordinates")));
            }
            let c = scalar(field(o, "constant", &pp)?, &format!("{pp}.constant"))?;
            pieces.push(AffineFn::new(slope, c));
        }
        entries.push(Entry { point: p, pieces });
    }

    let kdiv = match root.get("kdiv") {
        None | Some(Value::Null) => None,
        Some(Value::Array(items)) => {
            let mut out = Vec::new();
            let mut seen = BTreeSet::new();
            for (i, it) in items.iter().enumerate() {
                let path = format!("kdiv[{i}]");
                let o = it.as_object().ok_or_else(|| schema(&path, "expected an object"))?;
                check_keys(o, &["point", "a"], &path)?;
                let p = point(field(o, "point", &path)?, &format!("{path}.point"))?;
                if !seen.insert(p.clone()) {
                    return Err(schema(&format!("{path}.point"), format!("duplicate point {p}")));
                }
                let a = scalar(field(o, "a", &path)?, &format!("{path}.a"))?;
                if !a.is_integer() {
                    return Err(schema(&format!("{path}.a"), "coefficient must be an integer"));
                }
                out.push((p, a.to_integer()));
            }
            Some(out)
        }
        Some(_) => return Err(schema("kdiv", "expected an array")),
    };

    let precision = match root.get("precision") {
        None | Some(Value::Null) => None,
        Some(v) => Some(
            v.as_u64()
                .and_then(|x| u32::try_from(x).ok())
                .ok_or_else(|| schema("precision", "expected a positive integer"))?,
        ),
    };

    Ok(InputDocument {
        schema_version,
        box_vertices,
        entries,
        kdiv,
        precision,
    })
}

fn rat_value(r: &Rat) -> Value {
    if r.is_integer() {
        if let Ok(n) = i64::try_from(r.numer()) {
            return json!(n);
        }
    }
    Value::String(fmt_rat(r))
}

impl InputDocument {
    pub fn dim(&self) -> usize {
        self.box_vertices[0].dim()
    }

    pub fn to_json(&self) -> Value {
        let mut root = Map::new();
        root.insert("schema_version".into(), json!(self.schema_version));
        root.insert(
            "box".into(),
            Value::Array(
                self.box_vertices
                    .iter()
                    .map(|v| Value::Array(v.iter().map(rat_value).collect()))
                    .collect(),
            ),
        );
        root.insert(
            "entries".into(),
            Value::Array(
                self.entries
                    .iter()
                    .map(|e| {
                        json!({
                            "point": e.point.to_string(),
                            "pieces": e.pieces.iter().map(|p| json!({
                                "slope": p.linear.iter().map(|x| Value::String(fmt_rat(x))).collect::<Vec<_>>(),
                                "constant": fmt_rat(&p.constant),
                            })).collect::<Vec<_>>(),
                        })
                    })
                    .collect(),
            ),
        );
        if let Some(k) = &self.kdiv {
            root.insert(
                "kdiv".into(),
                Value::Array(
                    k.iter()
                        .map(|(p, a)| json!({"point": p.to_string(), "a": rat_value(&Rat::from_integer(a.clone()))}))
                        .collect(),
                ),
            );
        }
        if let Some(p) = self.precision {
            root.insert("precision".into(), json!(p));
        }
        Value::Object(root)
    }

    pub fn serialize(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("json");
        s.push('\n');
        s
    }

    /// Build the divisorial polytope. Geometric problems (degenerate box,
    /// inconsistent dimensions) are reported as schema errors.
    pub fn to_divpol(&self) -> Result<DivisorialPolytope, InputError> {
        let boxp = Polytope::hull(&self.box_vertices).map_err(|e| schema("box", e.to_string()))?;
        let kdiv = self
            .kdiv
            .as_ref()
            .map(|k| k.iter().cloned().collect());
        DivisorialPolytope::new(
            boxp,
            self.entries.iter().map(|e| (e.point.clone(), e.pieces.clone())),
            kdiv,
        )
        .map_err(|e| schema("entries", e.to_string()))
    }

    pub fn from_divpol(psi: &DivisorialPolytope) -> InputDocument {
        InputDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            box_vertices: psi.box_polytope().vertices().to_vec(),
            entries: psi
                .entries()
                .iter()
                .map(|(p, f)| Entry {
                    point: p.clone(),
                    pieces: f.pieces().to_vec(),
                })
                .collect(),
            kdiv: psi
                .kdiv()
                .map(|k| k.iter().map(|(p, a)| (p.clone(), a.clone())).collect()),
            precision: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use tfk_core::catalog;
    use tfk_core::exactgeom::rat;

    #[test]
    fn catalog_round_trip() {
        for (name, make) in catalog::all() {
            let doc = InputDocument::from_divpol(&make());
            let text = doc.serialize();
            let back = parse_input(&text).unwrap();
            assert_eq!(back, doc, "{name}");
            assert_eq!(back.serialize(), text);
        }
    }

    #[test]
    fn del_pezzo_document() {
        let doc = InputDocument::from_divpol(&catalog::dp4_3a1());
        assert_eq!(doc.entries.len(), 3);
        assert_eq!(doc.box_vertices, vec![RatVec::from_ints(&[-1]), RatVec::from_ints(&[1])]);
    }

    #[test]
    fn decimals_and_fractions() {
        let text = r#"{"box": [[-1], [1]], "entries": [
            {"point": "0", "pieces": [{"slope": ["0.5"], "constant": "1/3"}]}]}"#;
        let doc = parse_input(text).unwrap();
        assert_eq!(doc.entries[0].pieces[0].linear[0], rat(1, 2));
        assert_eq!(doc.entries[0].pieces[0].constant, rat(1, 3));
        let bad = text.replace("\"0.5\"", "\"pi\"");
        assert!(matches!(parse_input(&bad), Err(InputError::NonRationalNumber { .. })));
        let float = text.replace("\"0.5\"", "0.5");
        assert!(matches!(parse_input(&float), Err(InputError::NonRationalNumber { .. })));
    }

    #[test]
    fn duplicate_point() {
        let text = r#"{"box": [[-1], [1]], "entries": [
            {"point": "inf", "pieces": [{"slope": [0], "constant": 1}]},
            {"point": "[1,0]", "pieces": [{"slope": [0], "constant": 1}]}]}"#;
        match parse_input(text) {
            Err(InputError::Schema { path, message }) => {
                assert_eq!(path, "entries[1].point");
                assert!(message.contains("duplicate"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn syntax_error_position() {
        match parse_input("{\n  \"box\": [[-1], [1]],\n  oops\n}") {
            Err(InputError::Syntax { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn homogeneous_points() {
        let text = r#"{"box": [[-1], [1]], "entries": [
            {"point": "[1,2]", "pieces": [{"slope": [1], "constant": 1}, {"slope": [-1], "constant": 1}]}]}"#;
        let doc = parse_input(text).unwrap();
        assert_eq!(doc.entries[0].point, ProjPoint::Finite(rat(1, 2)));
        assert!(doc.to_divpol().is_ok());
    }
}
