//! Finite categories given by explicit composition tables, and their nerves.

use crate::error::{QcError, Result};
use crate::sset::{Idx, SMap, SSet, DEFAULT_TRUNC};
use serde_json::{json, Value};
use std::collections::HashMap;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub name: String,
    pub src: usize,
    pub dst: usize,
}

/// A finite category. `compose[g * M + f]` is `g . f` when `dst f = src g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinCat {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identity: Vec<usize>,
    compose: Vec<Option<usize>>,
}

impl FinCat {
    /// Builds and validates a category. Composites with an identity may be
    /// omitted from `table`; every other composable pair must be listed.
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identity: Vec<usize>,
        table: &[(usize, usize, usize)],
    ) -> Result<FinCat> {
        let m = morphisms.len();
        let bad = |s: String| QcError::Malformed(s);
        if identity.len() != objects.len() {
            return Err(bad("one identity per object required".into()));
        }
        for f in &morphisms {
            if f.src >= objects.len() || f.dst >= objects.len() {
                return Err(bad(format!("morphism {} has an unknown end", f.name)));
            }
        }
        for (o, &i) in identity.iter().enumerate() {
            if i >= m || morphisms[i].src != o || morphisms[i].dst != o {
                return Err(bad(format!("identity of {} is not an endomorphism of it", objects[o])));
            }
        }
        let mut compose = vec![None; m * m];
        for &(g, f, h) in table {
            if g >= m || f >= m || h >= m {
                return Err(bad("composition entry out of range".into()));
            }
            if morphisms[f].dst != morphisms[g].src {
                return Err(bad(format!("{} . {} is not composable", morphisms[g].name, morphisms[f].name)));
            }
            if morphisms[h].src != morphisms[f].src || morphisms[h].dst != morphisms[g].dst {
                return Err(bad(format!("{} . {} has the wrong ends", morphisms[g].name, morphisms[f].name)));
            }
            if compose[g * m + f].is_some_and(|x| x != h) {
                return Err(bad(format!("{} . {} listed twice", morphisms[g].name, morphisms[f].name)));
            }
            compose[g * m + f] = Some(h);
        }
        for (f, mf) in morphisms.iter().enumerate() {
            for (i, want) in [(identity[mf.dst], true), (identity[mf.src], false)] {
                let slot = if want { i * m + f } else { f * m + i };
                match compose[slot] {
                    None => compose[slot] = Some(f),
                    Some(h) if h == f => {}
                    Some(_) => return Err(bad(format!("identity law fails at {}", mf.name))),
                }
            }
        }
        let c = FinCat { objects, morphisms, identity, compose };
        c.check_laws()?;
        Ok(c)
    }

    fn check_laws(&self) -> Result<()> {
        let m = self.morphisms.len();
        for f in 0..m {
            for g in 0..m {
                if self.morphisms[f].dst == self.morphisms[g].src && self.compose[g * m + f].is_none() {
                    return Err(QcError::Malformed(format!(
                        "missing composite {} . {}",
                        self.morphisms[g].name, self.morphisms[f].name
                    )));
                }
            }
        }
        for f in 0..m {
            for g in 0..m {
                let Some(gf) = self.compose[g * m + f] else { continue };
                for h in 0..m {
                    if self.morphisms[g].dst != self.morphisms[h].src {
                        continue;
                    }
                    let hg = self.compose[h * m + g].expect("checked above");
                    if self.compose[h * m + gf] != self.compose[hg * m + f] {
                        return Err(QcError::Malformed(format!(
                            "associativity fails at ({}, {}, {})",
                            self.morphisms[h].name, self.morphisms[g].name, self.morphisms[f].name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn identity(&self, o: usize) -> usize {
        self.identity[o]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identity[self.morphisms[f].src] == f
    }

    pub fn src(&self, f: usize) -> usize {
        self.morphisms[f].src
    }

    pub fn dst(&self, f: usize) -> usize {
        self.morphisms[f].dst
    }

    /// `g . f`, if composable.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.compose[g * self.morphisms.len() + f]
    }

    pub fn hom(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.morphisms.len()).filter(|&f| self.src(f) == a && self.dst(f) == b).collect()
    }

    pub fn object_index(&self, name: &str) -> Result<usize> {
        self.objects.iter().position(|o| o == name).ok_or_else(|| QcError::UnknownId(name.into()))
    }

    pub fn morphism_index(&self, name: &str) -> Result<usize> {
        self.morphisms.iter().position(|f| f.name == name).ok_or_else(|| QcError::UnknownId(name.into()))
    }

    pub fn inverse(&self, f: usize) -> Option<usize> {
        let (a, b) = (self.src(f), self.dst(f));
        self.hom(b, a)
            .into_iter()
            .find(|&g| self.compose(g, f) == Some(self.identity[a]) && self.compose(f, g) == Some(self.identity[b]))
    }

    pub fn is_iso(&self, f: usize) -> bool {
        self.inverse(f).is_some()
    }

    /// Length of the longest chain of composable non-identity morphisms, or
    /// `None` when such chains are unbounded.
    pub fn longest_chain(&self) -> Option<usize> {
        let n = self.objects.len();
        let edges: Vec<(usize, usize)> = (0..self.morphisms.len())
            .filter(|&f| !self.is_identity(f))
            .map(|f| (self.src(f), self.dst(f)))
            .collect();
        // longest walk ending at each object, by relaxation; a cycle keeps growing
        let mut best = vec![0usize; n];
        for round in 0..=n {
            let mut changed = false;
            for &(a, b) in &edges {
                if best[a] + 1 > best[b] {
                    best[b] = best[a] + 1;
                    changed = true;
                }
            }
            if !changed {
                return Some(best.into_iter().max().unwrap_or(0));
            }
            if round == n {
                break;
            }
        }
        None
    }

    /// The subcategory of isomorphisms.
    pub fn core(&self) -> Result<FinCat> {
        let keep: Vec<usize> = (0..self.morphisms.len()).filter(|&f| self.is_iso(f)).collect();
        self.subcategory(&keep)
    }

    /// The full set of morphisms `keep` must contain identities and be closed
    /// under composition.
    pub fn subcategory(&self, keep: &[usize]) -> Result<FinCat> {
        let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let morphisms: Vec<Morphism> = keep.iter().map(|&f| self.morphisms[f].clone()).collect();
        let identity = self
            .identity
            .iter()
            .map(|i| pos.get(i).copied().ok_or_else(|| QcError::InvalidParameter("identity dropped".into())))
            .collect::<Result<Vec<_>>>()?;
        let mut table = Vec::new();
        for &g in keep {
            for &f in keep {
                if let Some(h) = self.compose(g, f) {
                    let h = *pos.get(&h).ok_or_else(|| QcError::InvalidParameter("not closed".into()))?;
                    table.push((pos[&g], pos[&f], h));
                }
            }
        }
        FinCat::new(self.objects.clone(), morphisms, identity, &table)
    }

    /// The over-category `C/c`.
    pub fn over(&self, c: usize) -> Result<FinCat> {
        let objs: Vec<usize> = (0..self.morphisms.len()).filter(|&f| self.dst(f) == c).collect();
        let opos: HashMap<usize, usize> = objs.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let mut morphisms = Vec::new();
        let mut key: HashMap<(usize, usize), usize> = HashMap::new();
        for &f in &objs {
            for &f2 in &objs {
                for g in self.hom(self.src(f), self.src(f2)) {
                    if self.compose(f2, g) == Some(f) {
                        key.insert((g, f2), morphisms.len());
                        morphisms.push(Morphism {
                            name: format!("{}/{}", self.morphisms[g].name, self.morphisms[f2].name),
                            src: opos[&f],
                            dst: opos[&f2],
                        });
                    }
                }
            }
        }
        let identity = objs.iter().map(|&f| key[&(self.identity[self.src(f)], f)]).collect();
        let mut table = Vec::new();
        for (&(g, _), &i) in &key {
            for (&(h, f3), &j) in &key {
                // (h: f2 -> f3) . (g: f -> f2)
                if morphisms[j].src == morphisms[i].dst {
                    let hg = self.compose(h, g).expect("composable in C");
                    table.push((j, i, key[&(hg, f3)]));
                }
            }
        }
        table.sort_unstable();
        let names = objs.iter().map(|&f| self.morphisms[f].name.clone()).collect();
        FinCat::new(names, morphisms, identity, &table)
    }

    pub fn to_json(&self) -> Value {
        let m = self.morphisms.len();
        let mut triples = Vec::new();
        for g in 0..m {
            for f in 0..m {
                if let Some(h) = self.compose[g * m + f] {
                    triples.push(json!([self.morphisms[g].name, self.morphisms[f].name, self.morphisms[h].name]));
                }
            }
        }
        json!({
            "objects": self.objects,
            "morphisms": self.morphisms.iter().map(|f| json!({
                "name": f.name, "src": self.objects[f.src], "dst": self.objects[f.dst]
            })).collect::<Vec<_>>(),
            "identities": self.objects.iter().enumerate()
                .map(|(o, name)| (name.clone(), json!(self.morphisms[self.identity[o]].name)))
                .collect::<serde_json::Map<_, _>>(),
            "compose": triples,
        })
    }

    pub fn from_json(v: &Value) -> Result<FinCat> {
        let bad = |s: &str| QcError::Malformed(format!("category: {s}"));
        let str_list = |k: &str| -> Result<Vec<String>> {
            v.get(k)
                .and_then(Value::as_array)
                .ok_or_else(|| bad(&format!("missing {k}")))?
                .iter()
                .map(|s| s.as_str().map(str::to_string).ok_or_else(|| bad("expected a string")))
                .collect()
        };
        let objects = str_list("objects")?;
        let opos: HashMap<&str, usize> = objects.iter().enumerate().map(|(i, o)| (o.as_str(), i)).collect();
        let obj = |s: Option<&Value>| -> Result<usize> {
            let s = s.and_then(Value::as_str).ok_or_else(|| bad("morphism end"))?;
            opos.get(s).copied().ok_or_else(|| QcError::UnknownId(s.into()))
        };
        let mut morphisms = Vec::new();
        for f in v.get("morphisms").and_then(Value::as_array).ok_or_else(|| bad("missing morphisms"))? {
            let name = f.get("name").and_then(Value::as_str).ok_or_else(|| bad("morphism name"))?;
            morphisms.push(Morphism { name: name.into(), src: obj(f.get("src"))?, dst: obj(f.get("dst"))? });
        }
        let mpos: HashMap<String, usize> = morphisms.iter().enumerate().map(|(i, f)| (f.name.clone(), i)).collect();
        if mpos.len() != morphisms.len() {
            return Err(bad("duplicate morphism name"));
        }
        let mor = |s: &Value| -> Result<usize> {
            let s = s.as_str().ok_or_else(|| bad("expected a morphism name"))?;
            mpos.get(s).copied().ok_or_else(|| QcError::UnknownId(s.into()))
        };
        let ids = v.get("identities").and_then(Value::as_object).ok_or_else(|| bad("missing identities"))?;
        let identity = objects
            .iter()
            .map(|o| mor(ids.get(o).ok_or_else(|| bad(&format!("no identity for {o}")))?))
            .collect::<Result<Vec<_>>>()?;
        let mut table = Vec::new();
        for t in v.get("compose").and_then(Value::as_array).ok_or_else(|| bad("missing compose"))? {
            let t = t.as_array().filter(|t| t.len() == 3).ok_or_else(|| bad("compose entries are triples"))?;
            table.push((mor(&t[0])?, mor(&t[1])?, mor(&t[2])?));
        }
        FinCat::new(objects, morphisms, identity, &table)
    }
}

/// The poset `[n] = {0 < 1 < ... < n}`.
pub fn poset(n: usize) -> FinCat {
    let objects: Vec<String> = (0..=n).map(|i| i.to_string()).collect();
    let mut morphisms = Vec::new();
    let mut idx = HashMap::new();
    for a in 0..=n {
        for b in a..=n {
            idx.insert((a, b), morphisms.len());
            let name = if a == b { format!("id{a}") } else { format!("{a}{b}") };
            morphisms.push(Morphism { name, src: a, dst: b });
        }
    }
    let identity = (0..=n).map(|a| idx[&(a, a)]).collect();
    let mut table = Vec::new();
    for a in 0..=n {
        for b in a..=n {
            for c in b..=n {
                table.push((idx[&(b, c)], idx[&(a, b)], idx[&(a, c)]));
            }
        }
    }
    FinCat::new(objects, morphisms, identity, &table).expect("poset laws")
}

/// The cyclic group of order `n` on one object `x`, elements `e, g, g2, ...`.
pub fn cyclic_group(n: usize) -> FinCat {
    assert!(n >= 1);
    let name = |k: usize| match k {
        0 => "e".to_string(),
        1 => "g".to_string(),
        k => format!("g{k}"),
    };
    let morphisms = (0..n).map(|k| Morphism { name: name(k), src: 0, dst: 0 }).collect();
    let mut table = Vec::new();
    for a in 0..n {
        for b in 0..n {
            table.push((a, b, (a + b) % n));
        }
    }
    FinCat::new(vec!["x".into()], morphisms, vec![0], &table).expect("group laws")
}

/// The groupoid with exactly one morphism between any two objects.
pub fn codiscrete(labels: &[&str]) -> FinCat {
    let k = labels.len();
    let objects: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
    let morphisms = (0..k)
        .flat_map(|a| (0..k).map(move |b| (a, b)))
        .map(|(a, b)| Morphism { name: format!("{}{}", labels[a], labels[b]), src: a, dst: b })
        .collect();
    let identity = (0..k).map(|a| a * k + a).collect();
    let mut table = Vec::new();
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                table.push((b * k + c, a * k + b, a * k + c));
            }
        }
    }
    FinCat::new(objects, morphisms, identity, &table).expect("groupoid laws")
}

/// Objects with identities only.
pub fn discrete(labels: &[&str]) -> FinCat {
    let objects: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
    let morphisms = labels.iter().enumerate().map(|(i, l)| Morphism { name: format!("id{l}"), src: i, dst: i }).collect();
    FinCat::new(objects, morphisms, (0..labels.len()).collect(), &[]).expect("discrete laws")
}

/// A functor given on objects and morphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functor {
    pub obj: Vec<usize>,
    pub mor: Vec<usize>,
}

impl Functor {
    pub fn validate(&self, c: &FinCat, d: &FinCat) -> Result<()> {
        let bad = |s: &str| QcError::InvalidParameter(format!("functor: {s}"));
        if self.obj.len() != c.num_objects() || self.mor.len() != c.num_morphisms() {
            return Err(bad("wrong shape"));
        }
        for f in 0..c.num_morphisms() {
            let g = self.mor[f];
            if d.src(g) != self.obj[c.src(f)] || d.dst(g) != self.obj[c.dst(f)] {
                return Err(bad("ends not preserved"));
            }
        }
        for o in 0..c.num_objects() {
            if self.mor[c.identity(o)] != d.identity(self.obj[o]) {
                return Err(bad("identity not preserved"));
            }
        }
        for g in 0..c.num_morphisms() {
            for f in 0..c.num_morphisms() {
                if let Some(h) = c.compose(g, f) {
                    if d.compose(self.mor[g], self.mor[f]) != Some(self.mor[h]) {
                        return Err(bad("composition not preserved"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Fully faithful and essentially surjective.
    pub fn is_equivalence(&self, c: &FinCat, d: &FinCat) -> bool {
        let ff = (0..c.num_objects()).all(|a| {
            (0..c.num_objects()).all(|b| {
                let mut img: Vec<usize> = c.hom(a, b).iter().map(|&f| self.mor[f]).collect();
                img.sort_unstable();
                img.dedup();
                img.len() == c.hom(a, b).len() && img.len() == d.hom(self.obj[a], self.obj[b]).len()
            })
        });
        let eso = (0..d.num_objects())
            .all(|y| self.obj.iter().any(|&x| x == y || d.hom(x, y).iter().any(|&f| d.is_iso(f))));
        ff && eso
    }
}

/// An isomorphism of categories, by backtracking over objects then morphisms.
pub fn find_isomorphism(c: &FinCat, d: &FinCat) -> Option<Functor> {
    if c.num_objects() != d.num_objects() || c.num_morphisms() != d.num_morphisms() {
        return None;
    }
    let n = c.num_objects();
    let mut obj = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn objs(c: &FinCat, d: &FinCat, i: usize, obj: &mut Vec<usize>, used: &mut Vec<bool>) -> Option<Functor> {
        if i == obj.len() {
            let mut mor = vec![usize::MAX; c.num_morphisms()];
            let mut mused = vec![false; d.num_morphisms()];
            return mors(c, d, 0, obj, &mut mor, &mut mused);
        }
        for y in 0..d.num_objects() {
            if used[y] {
                continue;
            }
            let ok = (0..i).all(|j| {
                c.hom(j, i).len() == d.hom(obj[j], y).len() && c.hom(i, j).len() == d.hom(y, obj[j]).len()
            }) && c.hom(i, i).len() == d.hom(y, y).len();
            if !ok {
                continue;
            }
            obj[i] = y;
            used[y] = true;
            if let Some(f) = objs(c, d, i + 1, obj, used) {
                return Some(f);
            }
            used[y] = false;
        }
        None
    }
    fn mors(
        c: &FinCat,
        d: &FinCat,
        f: usize,
        obj: &[usize],
        mor: &mut Vec<usize>,
        mused: &mut Vec<bool>,
    ) -> Option<Functor> {
        if f == mor.len() {
            let fun = Functor { obj: obj.to_vec(), mor: mor.clone() };
            return fun.validate(c, d).is_ok().then_some(fun);
        }
        for g in d.hom(obj[c.src(f)], obj[c.dst(f)]) {
            if mused[g] || c.is_identity(f) != d.is_identity(g) {
                continue;
            }
            mor[f] = g;
            // composites among already assigned morphisms must match
            let consistent = (0..=f).all(|a| {
                (0..=f).all(|b| match c.compose(a, b) {
                    Some(h) if h <= f => d.compose(mor[a], mor[b]) == Some(mor[h]),
                    _ => true,
                })
            });
            if consistent {
                mused[g] = true;
                if let Some(r) = mors(c, d, f + 1, obj, mor, mused) {
                    return Some(r);
                }
                mused[g] = false;
            }
        }
        mor[f] = usize::MAX;
        None
    }
    objs(c, d, 0, &mut obj, &mut used)
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Chain {
    Obj(usize),
    Mor(Vec<usize>),
}

/// The nerve truncated at `d`. Ids: objects at level 0, morphism names at
/// level 1, and `f|g|...` (first arrow first) above.
pub fn nerve(c: &FinCat, d: usize) -> Result<SSet> {
    let mut keys: Vec<Vec<Chain>> = vec![(0..c.num_objects()).map(Chain::Obj).collect()];
    let mut prev: Vec<Vec<usize>> = (0..c.num_morphisms()).map(|f| vec![f]).collect();
    if d >= 1 {
        keys.push(prev.iter().cloned().map(Chain::Mor).collect());
    }
    for _ in 2..=d {
        let mut next = Vec::new();
        for ch in &prev {
            let last = *ch.last().expect("nonempty chain");
            for g in 0..c.num_morphisms() {
                if c.src(g) == c.dst(last) {
                    let mut e = ch.clone();
                    e.push(g);
                    next.push(e);
                }
            }
        }
        keys.push(next.iter().cloned().map(Chain::Mor).collect());
        prev = next;
    }
    let face = |k: &Chain, i: usize| -> Chain {
        match k {
            Chain::Obj(_) => unreachable!("no faces at level 0"),
            Chain::Mor(fs) => {
                let n = fs.len();
                if n == 1 {
                    return Chain::Obj(if i == 0 { c.dst(fs[0]) } else { c.src(fs[0]) });
                }
                let mut out = fs.clone();
                if i == 0 {
                    out.remove(0);
                } else if i == n {
                    out.pop();
                } else {
                    let h = c.compose(fs[i], fs[i - 1]).expect("composable chain");
                    out.splice(i - 1..=i, [h]);
                }
                Chain::Mor(out)
            }
        }
    };
    let degen = |k: &Chain, i: usize| -> Chain {
        match k {
            Chain::Obj(o) => Chain::Mor(vec![c.identity(*o)]),
            Chain::Mor(fs) => {
                let obj = if i == 0 { c.src(fs[0]) } else { c.dst(fs[i - 1]) };
                let mut out = fs.clone();
                out.insert(i, c.identity(obj));
                Chain::Mor(out)
            }
        }
    };
    let name = |k: &Chain| -> String {
        match k {
            Chain::Obj(o) => c.objects()[*o].clone(),
            Chain::Mor(fs) => fs.iter().map(|&f| c.morphisms()[f].name.as_str()).collect::<Vec<_>>().join("|"),
        }
    };
    let stable = c.longest_chain().is_some_and(|l| l < d);
    let x = SSet::from_keys(keys, face, degen, name, stable)?;
    if d > 2 {
        x.set_coskeletal_hint(Some(2));
    }
    Ok(x)
}

pub fn nerve_default(c: &FinCat) -> SSet {
    nerve(c, DEFAULT_TRUNC).expect("nerve of a validated category")
}

/// The nerve of a functor, between nerves built by [`nerve`].
pub fn nerve_map(fun: &Functor, nc: &Arc<SSet>, nd: &Arc<SSet>, c: &FinCat, d: &FinCat) -> Result<SMap> {
    fun.validate(c, d)?;
    let top = nc.trunc_dim().min(nd.trunc_dim());
    let mut levels = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let col = (0..nc.len(n) as Idx)
            .map(|a| {
                let id = if n == 0 {
                    d.objects()[fun.obj[c.object_index(nc.id(0, a))?]].clone()
                } else {
                    nc.id(n, a)
                        .split('|')
                        .map(|f| c.morphism_index(f).map(|f| d.morphisms()[fun.mor[f]].name.as_str()))
                        .collect::<Result<Vec<_>>>()?
                        .join("|")
                };
                nd.find_at(n, &id)
            })
            .collect::<Result<Vec<_>>>()?;
        levels.push(col);
    }
    SMap::new(nc.clone(), nd.clone(), levels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::{delta, e_space, is_coskeletal, isomorphic};

    #[test]
    fn poset_nerve_is_a_simplex() {
        for n in 0..=3 {
            assert!(isomorphic(&nerve(&poset(n), 8).unwrap(), &delta(n)).unwrap());
        }
    }

    #[test]
    fn codiscrete_nerve_is_e_space() {
        let x = nerve(&codiscrete(&["0", "1"]), 5).unwrap();
        assert!(isomorphic(&x, &e_space(&["0", "1"], 5).unwrap()).unwrap());
        assert!(!x.is_stable());
    }

    #[test]
    fn z2_chain_counts() {
        let x = nerve(&cyclic_group(2), 4).unwrap();
        x.audit().unwrap();
        assert_eq!(x.level_sizes(), vec![1, 2, 4, 8, 16]);
        assert!(is_coskeletal(&x, 2).unwrap());
    }

    #[test]
    fn laws_are_checked() {
        let objects = vec!["a".to_string()];
        let morphisms = vec![
            Morphism { name: "1".into(), src: 0, dst: 0 },
            Morphism { name: "f".into(), src: 0, dst: 0 },
        ];
        // f . f missing
        assert!(FinCat::new(objects.clone(), morphisms.clone(), vec![0], &[]).is_err());
        assert!(FinCat::new(objects, morphisms, vec![0], &[(1, 1, 1)]).is_ok());
    }

    #[test]
    fn json_round_trip() {
        let c = poset(2);
        assert_eq!(FinCat::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn core_and_over() {
        assert_eq!(poset(2).core().unwrap().num_morphisms(), 3);
        let over = poset(2).over(2).unwrap();
        assert!(find_isomorphism(&over, &poset(2)).is_some());
        assert!(find_isomorphism(&poset(1), &codiscrete(&["a", "b"])).is_none());
    }

    #[test]
    fn longest_chains() {
        assert_eq!(poset(3).longest_chain(), Some(3));
        assert_eq!(cyclic_group(2).longest_chain(), None);
        assert_eq!(cyclic_group(1).longest_chain(), Some(0));
    }
}
