//! JSON formats.
//!
//! A simplicial set is
//! `{"trunc_dim": D, "levels": [[ids]...], "face": {"n,i": {id: id}}, "degen": {"n,i": {id: id}}}`
//! with an optional `"stable"` flag. A map is
//! `{"source": S, "target": T, "assignment": [{id: id}...]}` where `S` and `T`
//! are inline objects or file paths.

use super::{Idx, Level, SMap, SSet};
use crate::error::{QcError, Result};
use serde_json::{json, Map, Value};
use std::collections::HashMap;
use std::path::Path;
use std::sync::Arc;

pub fn to_json(x: &SSet) -> Value {
    let d = x.trunc_dim();
    let levels: Vec<Value> = x.levels().iter().map(|l| json!(l.ids)).collect();
    let mut face = Map::new();
    let mut degen = Map::new();
    for n in 0..=d {
        if n > 0 {
            for i in 0..=n {
                let m: Map<String, Value> = (0..x.len(n) as Idx)
                    .map(|a| (x.id(n, a).to_string(), json!(x.id(n - 1, x.face(n, i, a)))))
                    .collect();
                face.insert(format!("{n},{i}"), Value::Object(m));
            }
        }
        if n < d {
            for i in 0..=n {
                let m: Map<String, Value> = (0..x.len(n) as Idx)
                    .map(|a| (x.id(n, a).to_string(), json!(x.id(n + 1, x.degen(n, i, a)))))
                    .collect();
                degen.insert(format!("{n},{i}"), Value::Object(m));
            }
        }
    }
    json!({
        "trunc_dim": d,
        "stable": x.is_stable(),
        "levels": levels,
        "face": face,
        "degen": degen,
    })
}

pub fn to_json_string(x: &SSet) -> String {
    let mut s = serde_json::to_string_pretty(&to_json(x)).expect("serializable");
    s.push('\n');
    s
}

fn malformed(msg: impl Into<String>) -> QcError {
    QcError::Malformed(msg.into())
}

fn table(
    v: &Value,
    key: &str,
    from: &[String],
    to: &HashMap<&str, Idx>,
) -> Result<Vec<Idx>> {
    let obj = v.get(key).and_then(Value::as_object).ok_or_else(|| malformed(format!("missing table {key}")))?;
    if obj.len() != from.len() {
        return Err(malformed(format!("table {key} has {} entries, expected {}", obj.len(), from.len())));
    }
    from.iter()
        .map(|id| {
            let t = obj
                .get(id)
                .and_then(Value::as_str)
                .ok_or_else(|| malformed(format!("table {key} lacks {id:?}")))?;
            to.get(t).copied().ok_or_else(|| malformed(format!("table {key}: unknown id {t:?}")))
        })
        .collect()
}

/// Parses and audits a simplicial set.
pub fn from_json(v: &Value) -> Result<SSet> {
    let d = v.get("trunc_dim").and_then(Value::as_u64).ok_or_else(|| malformed("missing trunc_dim"))? as usize;
    let raw = v.get("levels").and_then(Value::as_array).ok_or_else(|| malformed("missing levels"))?;
    if raw.len() != d + 1 {
        return Err(malformed(format!("expected {} levels, found {}", d + 1, raw.len())));
    }
    let ids: Vec<Vec<String>> = raw
        .iter()
        .map(|l| {
            l.as_array()
                .ok_or_else(|| malformed("level is not an array"))?
                .iter()
                .map(|s| s.as_str().map(str::to_string).ok_or_else(|| malformed("id is not a string")))
                .collect()
        })
        .collect::<Result<_>>()?;
    let index: Vec<HashMap<&str, Idx>> = ids
        .iter()
        .map(|l| l.iter().enumerate().map(|(i, s)| (s.as_str(), i as Idx)).collect())
        .collect();
    for (n, l) in ids.iter().enumerate() {
        if index[n].len() != l.len() {
            return Err(malformed(format!("duplicate id at level {n}")));
        }
    }
    let face = v.get("face").ok_or_else(|| malformed("missing face"))?;
    let degen = v.get("degen").ok_or_else(|| malformed("missing degen"))?;
    let mut levels = Vec::with_capacity(d + 1);
    for n in 0..=d {
        let mut lv = Level { ids: ids[n].clone(), ..Level::default() };
        if n > 0 {
            for i in 0..=n {
                lv.faces.push(table(face, &format!("{n},{i}"), &ids[n], &index[n - 1])?);
            }
        }
        if n < d {
            for i in 0..=n {
                lv.degens.push(table(degen, &format!("{n},{i}"), &ids[n], &index[n + 1])?);
            }
        }
        levels.push(lv);
    }
    let stable = v.get("stable").and_then(Value::as_bool).unwrap_or(true);
    let x = SSet::from_levels(levels, stable)?;
    x.audit()?;
    Ok(x)
}

pub fn from_json_str(s: &str) -> Result<SSet> {
    from_json(&serde_json::from_str(s)?)
}

pub fn load(path: &Path) -> Result<SSet> {
    let text = std::fs::read_to_string(path).map_err(|e| QcError::Io(format!("{}: {e}", path.display())))?;
    from_json_str(&text)
}

/// Serializes a map; each end is inlined unless a path reference is given.
pub fn map_to_json(f: &SMap, source_ref: Option<&str>, target_ref: Option<&str>) -> Value {
    let (x, y) = (f.source(), f.target());
    let end = |s: &SSet, r: Option<&str>| r.map_or_else(|| to_json(s), |p| json!(p));
    let assignment: Vec<Value> = (0..=f.top())
        .map(|n| {
            let m: Map<String, Value> = (0..x.len(n) as Idx)
                .map(|a| (x.id(n, a).to_string(), json!(y.id(n, f.apply(n, a)))))
                .collect();
            Value::Object(m)
        })
        .collect();
    json!({"source": end(x, source_ref), "target": end(y, target_ref), "assignment": assignment})
}

fn resolve(v: &Value, base: Option<&Path>) -> Result<SSet> {
    match v {
        Value::String(p) => {
            let path = base.map_or_else(|| Path::new(p).to_path_buf(), |b| b.join(p));
            load(&path)
        }
        Value::Object(_) => from_json(v),
        _ => Err(malformed("map end must be a path or an inline object")),
    }
}

/// Parses and validates a map. Path references resolve against `base`.
pub fn map_from_json(v: &Value, base: Option<&Path>) -> Result<SMap> {
    let x = Arc::new(resolve(v.get("source").ok_or_else(|| malformed("missing source"))?, base)?);
    let y = Arc::new(resolve(v.get("target").ok_or_else(|| malformed("missing target"))?, base)?);
    let raw = v.get("assignment").and_then(Value::as_array).ok_or_else(|| malformed("missing assignment"))?;
    let top = x.trunc_dim().min(y.trunc_dim());
    if raw.len() != top + 1 {
        return Err(malformed(format!("assignment needs {} levels", top + 1)));
    }
    let mut levels = Vec::with_capacity(top + 1);
    for (n, m) in raw.iter().enumerate() {
        let obj = m.as_object().ok_or_else(|| malformed("assignment level is not an object"))?;
        let col = (0..x.len(n) as Idx)
            .map(|a| {
                let t = obj
                    .get(x.id(n, a))
                    .and_then(Value::as_str)
                    .ok_or_else(|| malformed(format!("assignment lacks {:?}", x.id(n, a))))?;
                y.find_at(n, t)
            })
            .collect::<Result<Vec<_>>>()?;
        levels.push(col);
    }
    SMap::new(x, y, levels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::{boundary, delta, e_space, horn};

    #[test]
    fn round_trip_is_bit_exact() {
        for x in [delta(2), boundary(3), horn(3, 1).unwrap(), e_space(&["a", "b"], 3).unwrap()] {
            let text = to_json_string(&x);
            let back = from_json_str(&text).unwrap();
            assert_eq!(back, x);
            assert_eq!(to_json_string(&back), text);
        }
    }

    #[test]
    fn broken_identity_is_rejected() {
        let mut v = to_json(&delta(1));
        v["face"]["1,0"]["01"] = json!("0");
        assert!(matches!(from_json(&v), Err(QcError::IdentityViolation(_))));
    }

    #[test]
    fn missing_entries_are_malformed() {
        let mut v = to_json(&delta(1));
        v["face"]["1,1"].as_object_mut().unwrap().remove("01");
        assert!(matches!(from_json(&v), Err(QcError::Malformed(_))));
    }

    #[test]
    fn map_round_trip() {
        let a = Arc::new(delta(1));
        let b = Arc::new(delta(2));
        let f = crate::sset::simplex_map(&a, &b, &[0, 2]).unwrap();
        let v = map_to_json(&f, None, None);
        let g = map_from_json(&v, None).unwrap();
        assert_eq!(g.levels(), f.levels());
    }
}
