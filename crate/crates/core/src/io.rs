//! JSON reading and writing for every artifact kind.
//!
//! Schema errors carry a path such as `alpha[1][0]`; syntax errors carry a
//! line and column.

use serde_json::{json, Map, Value};

use crate::dialectica::{DialMorphism, DialObject};
use crate::error::{Error, Result};
use crate::finset::{FinMap, FinSet};
use crate::fnets::{FuzzyNet, NetMorphism};
use crate::lineale::{Degree, Orientation};
use crate::simulator::Marking;
use crate::toposys::{CrispTopSystem, Frame, FuzzyTopSystem};

/// Parses JSON text, reporting syntax errors with their position.
pub fn parse(text: &str) -> Result<Value> {
    Ok(serde_json::from_str(text)?)
}

/// Canonical text form of an artifact: pretty-printed, sorted keys, trailing
/// newline.
pub fn to_canonical(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn field<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a Value> {
    v.as_object()
        .ok_or_else(|| Error::schema(path, "expected a JSON object"))?
        .get(key)
        .ok_or_else(|| Error::schema(path, format!("missing field {key:?}")))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::schema(path, "expected an array"))
}

pub fn degree_from_json(v: &Value, path: &str) -> Result<Degree> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => return Err(Error::schema(path, format!("expected a degree, found {other}"))),
    };
    text.parse().map_err(|e: Error| Error::schema(path, e.to_string()))
}

pub fn carrier_from_json(v: &Value, path: &str) -> Result<FinSet> {
    let labels = array(v, path)?.clone();
    FinSet::listed(labels).map_err(|e| Error::schema(path, e.to_string()))
}

fn carrier_to_json(s: &FinSet) -> Value {
    Value::Array(s.labels())
}

fn matrix_from_json(v: &Value, rows: usize, cols: usize, path: &str) -> Result<Vec<Degree>> {
    let r = array(v, path)?;
    if r.len() != rows {
        return Err(Error::schema(path, format!("expected {rows} rows, found {}", r.len())));
    }
    let mut out = Vec::with_capacity(rows * cols);
    for (i, row) in r.iter().enumerate() {
        let row_path = format!("{path}[{i}]");
        let row = array(row, &row_path)?;
        if row.len() != cols {
            return Err(Error::schema(
                &row_path,
                format!("expected {cols} entries, found {}", row.len()),
            ));
        }
        for (j, entry) in row.iter().enumerate() {
            out.push(degree_from_json(entry, &format!("{row_path}[{j}]"))?);
        }
    }
    Ok(out)
}

fn matrix_to_json(rows: Vec<Vec<Degree>>) -> Value {
    Value::Array(
        rows.into_iter()
            .map(|r| Value::Array(r.into_iter().map(|d| Value::String(d.to_string())).collect()))
            .collect(),
    )
}

fn bool_matrix_from_json(v: &Value, rows: usize, cols: usize, path: &str) -> Result<Vec<bool>> {
    let r = array(v, path)?;
    if r.len() != rows {
        return Err(Error::schema(path, format!("expected {rows} rows, found {}", r.len())));
    }
    let mut out = Vec::with_capacity(rows * cols);
    for (i, row) in r.iter().enumerate() {
        let row_path = format!("{path}[{i}]");
        let row = array(row, &row_path)?;
        if row.len() != cols {
            return Err(Error::schema(
                &row_path,
                format!("expected {cols} entries, found {}", row.len()),
            ));
        }
        for (j, entry) in row.iter().enumerate() {
            out.push(entry.as_bool().ok_or_else(|| {
                Error::schema(format!("{row_path}[{j}]"), "expected true or false")
            })?);
        }
    }
    Ok(out)
}

/// `{"U": [...], "X": [...], "alpha": [[...]], "orientation": "standard"}`;
/// the orientation defaults to standard.
pub fn object_from_json(v: &Value) -> Result<DialObject> {
    let u = carrier_from_json(field(v, "U", "")?, "U")?;
    let x = carrier_from_json(field(v, "X", "")?, "X")?;
    let alpha = matrix_from_json(field(v, "alpha", "")?, u.len(), x.len(), "alpha")?;
    let orientation = match v.get("orientation") {
        None => Orientation::Standard,
        Some(o) => serde_json::from_value(o.clone()).map_err(|_| {
            Error::schema("orientation", "expected \"standard\" or \"opposite\"")
        })?,
    };
    DialObject::new(u, x, alpha, orientation)
}

pub fn object_to_json(a: &DialObject) -> Value {
    json!({
        "U": carrier_to_json(a.left()),
        "X": carrier_to_json(a.right()),
        "alpha": matrix_to_json(a.rows()),
        "orientation": a.orientation().name(),
    })
}

/// `{"f": {u: v, ...}, "g": {y: x, ...}}` for a morphism `a → b`.
pub fn maps_from_json(v: &Value, a: &DialObject, b: &DialObject) -> Result<(FinMap, FinMap)> {
    Ok((
        FinMap::from_json(field(v, "f", "")?, a.left(), b.left(), "f")?,
        FinMap::from_json(field(v, "g", "")?, b.right(), a.right(), "g")?,
    ))
}

pub fn morphism_to_json(m: &DialMorphism) -> Value {
    json!({ "f": m.f().to_json(), "g": m.g().to_json() })
}

/// `{"events", "conditions", "pre", "post"}` with matrices indexed
/// `[event][condition]`.
pub fn net_from_json(v: &Value) -> Result<FuzzyNet> {
    let e = carrier_from_json(field(v, "events", "")?, "events")?;
    let b = carrier_from_json(field(v, "conditions", "")?, "conditions")?;
    let pre = matrix_from_json(field(v, "pre", "")?, e.len(), b.len(), "pre")?;
    let post = matrix_from_json(field(v, "post", "")?, e.len(), b.len(), "post")?;
    FuzzyNet::new(e, b, pre, post)
}

pub fn net_to_json(n: &FuzzyNet) -> Value {
    json!({
        "events": carrier_to_json(n.events()),
        "conditions": carrier_to_json(n.conditions()),
        "pre": matrix_to_json(n.pre_fibre().rows()),
        "post": matrix_to_json(n.post_fibre().rows()),
    })
}

/// `{"f": {e: e′, ...}, "F": {b′: b, ...}}` for a simulation `n → n2`.
pub fn net_maps_from_json(v: &Value, n: &FuzzyNet, n2: &FuzzyNet) -> Result<(FinMap, FinMap)> {
    Ok((
        FinMap::from_json(field(v, "f", "")?, n.events(), n2.events(), "f")?,
        FinMap::from_json(field(v, "F", "")?, n2.conditions(), n.conditions(), "F")?,
    ))
}

pub fn net_morphism_to_json(m: &NetMorphism) -> Value {
    json!({ "f": m.event_map().to_json(), "F": m.condition_map().to_json() })
}

/// `{"elements", "le", "top", "bottom"}`; meets and joins are derived.
pub fn frame_from_json(v: &Value) -> Result<Frame> {
    let elements = carrier_from_json(field(v, "elements", "")?, "elements")?;
    let n = elements.len();
    let le = bool_matrix_from_json(field(v, "le", "")?, n, n, "le")?;
    let find = |key: &str| -> Result<usize> {
        let label = field(v, key, "")?;
        elements
            .lookup(label)
            .ok_or_else(|| Error::schema(key, format!("{label} is not an element")))
    };
    let (top, bottom) = (find("top")?, find("bottom")?);
    Frame::new(elements, le.chunks(n.max(1)).map(<[bool]>::to_vec).collect(), top, bottom)
}

pub fn frame_to_json(f: &Frame) -> Value {
    json!({
        "elements": carrier_to_json(f.elements()),
        "le": f.order_rows(),
        "top": f.elements().label(f.top()),
        "bottom": f.elements().label(f.bottom()),
    })
}

/// A system file before its axioms are checked.
#[derive(Debug, Clone)]
pub enum SystemInput {
    /// `sat`: a degree matrix indexed `[point][open]`.
    Fuzzy {
        points: FinSet,
        frame: Frame,
        sat: Vec<Degree>,
    },
    /// `models`: a boolean matrix indexed `[point][open]`.
    Crisp(CrispTopSystem),
}

/// A frame plus `"points"` and either `"sat"` or `"models"`.
pub fn system_from_json(v: &Value) -> Result<SystemInput> {
    let frame = frame_from_json(v)?;
    let points = carrier_from_json(field(v, "points", "")?, "points")?;
    let (rows, cols) = (points.len(), frame.len());
    match (v.get("sat"), v.get("models")) {
        (Some(sat), None) => Ok(SystemInput::Fuzzy {
            sat: matrix_from_json(sat, rows, cols, "sat")?,
            points,
            frame,
        }),
        (None, Some(models)) => Ok(SystemInput::Crisp(CrispTopSystem {
            models: bool_matrix_from_json(models, rows, cols, "models")?,
            points,
            frame,
        })),
        _ => Err(Error::schema("", "expected exactly one of \"sat\" and \"models\"")),
    }
}

pub fn system_to_json(s: &FuzzyTopSystem) -> Value {
    let mut v = frame_to_json(s.frame());
    let obj = v.as_object_mut().expect("frame JSON is an object");
    obj.insert("points".into(), carrier_to_json(s.points()));
    obj.insert("sat".into(), matrix_to_json(s.sat_rows()));
    v
}

/// `{"marking": {b: degree, ...}}`; every condition must appear.
pub fn marking_from_json(v: &Value, conditions: &FinSet) -> Result<Marking> {
    let obj = field(v, "marking", "")?
        .as_object()
        .ok_or_else(|| Error::schema("marking", "expected a JSON object"))?;
    let mut degrees = vec![None; conditions.len()];
    for (key, d) in obj {
        let path = format!("marking.{key}");
        let b = conditions
            .lookup_key(key)
            .ok_or_else(|| Error::schema(&path, "not a condition of the net"))?;
        degrees[b] = Some(degree_from_json(d, &path)?);
    }
    let degrees = degrees
        .into_iter()
        .enumerate()
        .map(|(b, d)| {
            d.ok_or_else(|| {
                Error::schema("marking", format!("no degree for {}", conditions.describe(b)))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Marking::new(conditions, degrees)
}

pub fn marking_to_json(m: &Marking) -> Value {
    let map: Map<String, Value> = m
        .conditions()
        .indices()
        .map(|b| (m.conditions().describe(b), Value::String(m.at(b).to_string())))
        .collect();
    json!({ "marking": map })
}

/// Field access for callers outside this module, with the same error shape.
pub fn require<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    field(v, key, "")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn object_round_trip() {
        let v = parse(
            r#"{"U": ["u0", "u1"], "X": ["x"], "alpha": [["1/2"], [0.25]], "orientation": "opposite"}"#,
        )
        .unwrap();
        let a = object_from_json(&v).unwrap();
        assert_eq!(a.orientation(), Orientation::Opposite);
        assert_eq!(a.at(1, 0), Degree::new(1, 4).unwrap());
        let again = object_from_json(&object_to_json(&a)).unwrap();
        assert_eq!(again, a);
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse("{\n  \"U\": [\n").unwrap_err();
        assert!(matches!(err, Error::Json { line: 3, .. }));
        let v = parse(r#"{"U": ["u"], "X": ["x"], "alpha": [["7/5"]]}"#).unwrap();
        match object_from_json(&v).unwrap_err() {
            Error::Schema { path, .. } => assert_eq!(path, "alpha[0][0]"),
            other => panic!("unexpected {other:?}"),
        }
        let v = parse(r#"{"U": ["u", "u"], "X": [], "alpha": [[], []]}"#).unwrap();
        assert!(object_from_json(&v).unwrap_err().is_input_error());
    }

    #[test]
    fn structured_labels_round_trip() {
        let v = parse(r#"{"U": [["a", 1], {"k": "v"}], "X": ["x"], "alpha": [["1"], ["0"]]}"#).unwrap();
        let a = object_from_json(&v).unwrap();
        let m = DialMorphism::identity(&a);
        let text = to_canonical(&morphism_to_json(&m));
        let (f, g) = maps_from_json(&parse(&text).unwrap(), &a, &a).unwrap();
        assert_eq!((&f, &g), (m.f(), m.g()));
    }

    #[test]
    fn nets_markings_and_systems() {
        let n = net_from_json(
            &parse(r#"{"events": ["e"], "conditions": ["b", "c"], "pre": [["3/5", 0]], "post": [[0, "9/10"]]}"#)
                .unwrap(),
        )
        .unwrap();
        assert_eq!(net_from_json(&net_to_json(&n)).unwrap(), n);
        let m = marking_from_json(&parse(r#"{"marking": {"b": "2/5", "c": 0}}"#).unwrap(), n.conditions()).unwrap();
        assert_eq!(marking_from_json(&marking_to_json(&m), n.conditions()).unwrap(), m);
        assert!(marking_from_json(&parse(r#"{"marking": {"b": 1}}"#).unwrap(), n.conditions()).is_err());

        let s = parse(
            r#"{"elements": ["bot", "top"], "le": [[true, true], [false, true]], "top": "top", "bottom": "bot",
                "points": ["p"], "sat": [["0", "1/2"]]}"#,
        )
        .unwrap();
        let SystemInput::Fuzzy { points, frame, sat } = system_from_json(&s).unwrap() else {
            panic!("expected a fuzzy system");
        };
        let sys = FuzzyTopSystem::new(points, frame, sat).unwrap();
        let again = system_to_json(&sys);
        assert!(matches!(system_from_json(&again).unwrap(), SystemInput::Fuzzy { .. }));
        assert_eq!(frame_from_json(&frame_to_json(sys.frame())).unwrap(), *sys.frame());
    }
}
