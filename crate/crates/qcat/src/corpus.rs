//! Named sample objects and the recipes that rebuild them.

use crate::category::{codiscrete, cyclic_group, nerve, poset, FinCat, Morphism};
use crate::error::{QcError, Result};
use crate::mapping::{cosimplicial_interval, Model};
use crate::sset::{
    boundary_trunc, delta_trunc, e_space, horn_trunc, join, load, prism_quotient, product, squashed, SSet,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::path::Path;

/// A constructor expression. Every variant carries its own truncation where
/// one is needed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Recipe {
    Delta { n: usize, trunc: usize },
    Boundary { n: usize, trunc: usize },
    Horn { n: usize, k: usize, trunc: usize },
    ESpace { labels: Vec<String>, trunc: usize },
    /// Nerve of a named sample category.
    Nerve { category: String, trunc: usize },
    Product { left: Box<Recipe>, right: Box<Recipe> },
    Join { left: Box<Recipe>, right: Box<Recipe> },
    Squashed { n: usize, k: usize, trunc: usize },
    Prism { n: usize, trunc: usize },
    /// The degree-`degree` object of an interval resolution.
    Interval { model: String, degree: usize, trunc: usize },
    File { path: String },
}

/// The non-invertible sample category: `f: a -> b`, `g: b -> c` and two
/// arrows `h, k: a -> c` with `g . f = h`.
pub fn span3() -> FinCat {
    let objects = vec!["a".to_string(), "b".into(), "c".into()];
    let m = |name: &str, src, dst| Morphism { name: name.into(), src, dst };
    let morphisms = vec![
        m("ida", 0, 0),
        m("idb", 1, 1),
        m("idc", 2, 2),
        m("f", 0, 1),
        m("g", 1, 2),
        m("h", 0, 2),
        m("k", 0, 2),
    ];
    FinCat::new(objects, morphisms, vec![0, 1, 2], &[(4, 3, 5)]).expect("category laws")
}

/// Sample categories by name: `z2`, `groupoid2`, `span3`, `poset<n>`.
pub fn category(name: &str) -> Result<FinCat> {
    match name {
        "z2" => Ok(cyclic_group(2)),
        "groupoid2" => Ok(codiscrete(&["p", "q"])),
        "span3" => Ok(span3()),
        _ => match name.strip_prefix("poset").map(str::parse::<usize>) {
            Some(Ok(n)) => Ok(poset(n)),
            _ => Err(QcError::InvalidParameter(format!("unknown sample category {name:?}"))),
        },
    }
}

impl Recipe {
    pub fn build(&self, base: Option<&Path>) -> Result<SSet> {
        match self {
            Recipe::Delta { n, trunc } => delta_trunc(*n, *trunc),
            Recipe::Boundary { n, trunc } => boundary_trunc(*n, *trunc),
            Recipe::Horn { n, k, trunc } => horn_trunc(*n, *k, *trunc),
            Recipe::ESpace { labels, trunc } => {
                if labels.is_empty() {
                    return Err(QcError::InvalidParameter("E-space of the empty set".into()));
                }
                e_space(labels, *trunc)
            }
            Recipe::Nerve { category: c, trunc } => nerve(&category(c)?, *trunc),
            Recipe::Product { left, right } => product(&left.build(base)?, &right.build(base)?),
            Recipe::Join { left, right } => join(&left.build(base)?, &right.build(base)?),
            Recipe::Squashed { n, k, trunc } => squashed(*n, *k, *trunc),
            Recipe::Prism { n, trunc } => prism_quotient(*n, *trunc),
            Recipe::Interval { model, degree, trunc } => {
                let c = cosimplicial_interval(model.parse::<Model>()?, *degree, *trunc)?;
                Ok(c.objects[*degree].as_ref().clone())
            }
            Recipe::File { path } => load(&base.map_or_else(|| Path::new(path).to_path_buf(), |b| b.join(path))),
        }
    }

    pub fn from_json(v: &Value) -> Result<Recipe> {
        Ok(serde_json::from_value(v.clone())?)
    }
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub recipe: Recipe,
    /// Values the built object must reproduce.
    pub expected: Value,
}

fn entry(name: &str, recipe: Recipe, expected: Value) -> CorpusEntry {
    CorpusEntry { name: name.into(), recipe, expected }
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        0
    } else {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }
}

/// The shipped sample objects, in file order.
pub fn entries() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for n in 0..=4 {
        let counts: Vec<usize> = (0..=n + 1).map(|k| binom(n + 1, k + 1)).collect();
        out.push(entry(&format!("delta{n}"), Recipe::Delta { n, trunc: n + 1 }, json!({ "nondegenerate": counts })));
    }
    for n in 1..=3 {
        let counts: Vec<usize> = (0..=n).map(|k| if k < n { binom(n + 1, k + 1) } else { 0 }).collect();
        out.push(entry(&format!("boundary{n}"), Recipe::Boundary { n, trunc: n }, json!({ "nondegenerate": counts })));
    }
    for (n, k) in [(2, 0), (2, 1), (2, 2), (3, 0), (3, 1), (3, 2), (3, 3)] {
        let counts: Vec<usize> =
            (0..=n).map(|j| if j + 1 < n { binom(n + 1, j + 1) } else if j + 1 == n { n } else { 0 }).collect();
        out.push(entry(&format!("horn{n}{k}"), Recipe::Horn { n, k, trunc: n }, json!({ "nondegenerate": counts })));
    }
    let e1 = vec![2usize; 6];
    out.push(entry("e1", Recipe::ESpace { labels: vec!["0".into(), "1".into()], trunc: 5 }, json!({ "nondegenerate": e1 })));
    out.push(entry(
        "e2",
        Recipe::ESpace { labels: vec!["0".into(), "1".into(), "2".into()], trunc: 3 },
        json!({ "level_sizes": [3, 9, 27, 81] }),
    ));
    for n in 1..=3 {
        let counts: Vec<usize> = (0..=n + 1).map(|k| binom(n + 1, k + 1)).collect();
        out.push(entry(
            &format!("poset{n}"),
            Recipe::Nerve { category: format!("poset{n}"), trunc: n + 1 },
            json!({ "nondegenerate": counts }),
        ));
    }
    out.push(entry(
        "nerve-z2",
        Recipe::Nerve { category: "z2".into(), trunc: 6 },
        json!({ "level_sizes": [1, 2, 4, 8, 16, 32, 64] }),
    ));
    out.push(entry(
        "nerve-groupoid2",
        Recipe::Nerve { category: "groupoid2".into(), trunc: 6 },
        json!({ "level_sizes": [2, 4, 8, 16, 32, 64, 128] }),
    ));
    out.push(entry(
        "nerve-span3",
        Recipe::Nerve { category: "span3".into(), trunc: 4 },
        json!({ "nondegenerate": [3, 4, 1, 0, 0] }),
    ));
    let d = |n: usize, t: usize| Box::new(Recipe::Delta { n, trunc: t });
    for n in 1..=3 {
        // shuffles: n+1 top simplices of dimension n+1
        out.push(entry(
            &format!("delta{n}xdelta1"),
            Recipe::Product { left: d(n, n + 2), right: d(1, n + 2) },
            json!({ "top_nondegenerate": [n + 1, n + 1] }),
        ));
    }
    for model in ["R", "L", "cyl"] {
        for degree in 0..=2 {
            out.push(entry(
                &format!("c-{}-{degree}", model.to_lowercase()),
                Recipe::Interval { model: model.into(), degree, trunc: degree + 2 },
                json!({ "vertices": 2 }),
            ));
        }
    }
    for degree in 0..=2 {
        out.push(entry(
            &format!("c-e-{degree}"),
            Recipe::Interval { model: "E".into(), degree, trunc: 3 },
            json!({ "vertices": 2 }),
        ));
    }
    out
}

/// Checks an object against an expected-results block.
pub fn check_expected(x: &SSet, expected: &Value) -> std::result::Result<(), String> {
    let list = |k: &str| -> Option<Vec<usize>> {
        expected.get(k).map(|v| serde_json::from_value(v.clone()).expect("expected values are integer lists"))
    };
    if let Some(want) = list("nondegenerate") {
        let got = x.nondegenerate_counts();
        if got != want {
            return Err(format!("nondegenerate counts {got:?}, expected {want:?}"));
        }
    }
    if let Some(want) = list("level_sizes") {
        let got = x.level_sizes();
        if got != want {
            return Err(format!("level sizes {got:?}, expected {want:?}"));
        }
    }
    if let Some(want) = list("top_nondegenerate") {
        let top = want[0];
        let got = x.nondegenerate(top).len();
        if got != want[1] || x.max_nondeg_dim() != Some(top) {
            return Err(format!("{got} nondegenerate {top}-simplices, expected {}", want[1]));
        }
    }
    if let Some(v) = expected.get("vertices").and_then(Value::as_u64) {
        if x.len(0) != v as usize {
            return Err(format!("{} vertices, expected {v}", x.len(0)));
        }
    }
    Ok(())
}

/// The manifest listing every entry with its file, recipe and expectations.
pub fn manifest() -> Value {
    let items: Vec<Value> = entries()
        .into_iter()
        .map(|e| {
            json!({
                "name": e.name,
                "file": format!("{}.json", e.name),
                "recipe": serde_json::to_value(&e.recipe).expect("serializable recipe"),
                "expected": e.expected,
            })
        })
        .collect();
    json!({ "entries": items })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entries_build_and_match() {
        for e in entries() {
            let x = e.recipe.build(None).unwrap();
            x.audit().unwrap();
            check_expected(&x, &e.expected).unwrap_or_else(|m| panic!("{}: {m}", e.name));
        }
    }

    #[test]
    fn recipes_round_trip() {
        for e in entries() {
            let v = serde_json::to_value(&e.recipe).unwrap();
            assert_eq!(Recipe::from_json(&v).unwrap(), e.recipe);
        }
        assert!(category("nope").is_err());
    }

    #[test]
    fn span3_is_not_a_groupoid() {
        let c = span3();
        assert_eq!(c.hom(0, 2).len(), 2);
        assert!((0..c.num_morphisms()).filter(|&f| c.is_iso(f)).all(|f| c.is_identity(f)));
    }
}
