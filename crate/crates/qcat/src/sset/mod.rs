//! Finite truncated simplicial sets stored as explicit levelwise tables.
//!
//! Every level holds all simplices, degenerate ones included, together with
//! the face and degeneracy tables. Simplices are addressed by `(level, index)`;
//! string ids are kept for IO and for certificates.

mod build;
mod io;
pub(crate) mod maps;
mod ops;
mod subcomplex;

pub use build::{
    boundary, boundary_trunc, delta, delta_trunc, e_space, e_space_map, empty, horn, horn_trunc, point,
    prism_quotient, simplex_map, squashed,
};
pub use io::{from_json, from_json_str, load, map_from_json, map_to_json, to_json, to_json_string};
pub use maps::{
    enumerate_maps, enumerate_maps_with, find_isomorphism, for_each_map, isomorphic, Constraints,
    EnumOptions, SMap,
};
pub use ops::{
    coskeleton, is_coskeletal, join, join_map, product, product_map, pullback, pushout, quotient,
    skeleton, Pullback, Pushout, Quotient,
};
pub use subcomplex::Subcomplex;
pub(crate) use build::prism_label;

use crate::error::{QcError, Result};
use std::collections::HashMap;
use std::hash::Hash;
use std::sync::{Arc, OnceLock};

pub type Idx = u32;

/// Default truncation dimension for library objects.
pub const DEFAULT_TRUNC: usize = 8;

const NONDEG: u8 = u8::MAX;

#[derive(Clone, Debug, Default)]
pub struct Level {
    pub ids: Vec<String>,
    /// `faces[i][x]` is `d_i x`; empty at level 0.
    pub faces: Vec<Vec<Idx>>,
    /// `degens[i][x]` is `s_i x`; empty at the top level.
    pub degens: Vec<Vec<Idx>>,
}

impl Level {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}

#[derive(Debug, Default)]
struct Caches {
    ids: OnceLock<HashMap<String, (usize, Idx)>>,
    face_index: Vec<OnceLock<HashMap<Vec<Idx>, Vec<Idx>>>>,
    coskeletal: OnceLock<Option<usize>>,
}

impl Clone for Caches {
    fn clone(&self) -> Self {
        Caches {
            ids: self.ids.clone(),
            face_index: self.face_index.clone(),
            coskeletal: self.coskeletal.clone(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SSet {
    levels: Vec<Level>,
    stable: bool,
    /// `(i, y)` with `x = s_i y`, or `NONDEG`.
    desc: Vec<Vec<(u8, Idx)>>,
    caches: Caches,
}

impl PartialEq for SSet {
    fn eq(&self, other: &Self) -> bool {
        self.stable == other.stable
            && self.levels.len() == other.levels.len()
            && self.levels.iter().zip(&other.levels).all(|(a, b)| {
                a.ids == b.ids && a.faces == b.faces && a.degens == b.degens
            })
    }
}

impl Eq for SSet {}

/// Normal form `x = theta^* root` with `theta` a monotone surjection.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormalForm {
    pub root_dim: usize,
    pub root: Idx,
    pub surjection: Vec<usize>,
}

impl NormalForm {
    pub fn is_nondegenerate(&self) -> bool {
        self.surjection.len() == self.root_dim + 1
    }
}

impl SSet {
    /// Builds a simplicial set from explicit tables, checking shapes and index
    /// ranges. Simplicial identities are checked separately by [`SSet::audit`].
    pub fn from_levels(levels: Vec<Level>, stable: bool) -> Result<SSet> {
        if levels.is_empty() {
            return Err(QcError::Malformed("no levels".into()));
        }
        let d = levels.len() - 1;
        for (n, lv) in levels.iter().enumerate() {
            let want_faces = if n == 0 { 0 } else { n + 1 };
            if lv.faces.len() != want_faces {
                return Err(QcError::Malformed(format!("level {n}: expected {want_faces} face maps")));
            }
            let want_degens = if n == d { 0 } else { n + 1 };
            if lv.degens.len() != want_degens {
                return Err(QcError::Malformed(format!(
                    "level {n}: expected {want_degens} degeneracy maps"
                )));
            }
            for f in &lv.faces {
                if f.len() != lv.len() {
                    return Err(QcError::Malformed(format!("level {n}: face table length")));
                }
                let below = levels[n - 1].len() as Idx;
                if f.iter().any(|&y| y >= below) {
                    return Err(QcError::Malformed(format!("level {n}: face index out of range")));
                }
            }
            for s in &lv.degens {
                if s.len() != lv.len() {
                    return Err(QcError::Malformed(format!("level {n}: degeneracy table length")));
                }
                let above = levels[n + 1].len() as Idx;
                if s.iter().any(|&y| y >= above) {
                    return Err(QcError::Malformed(format!(
                        "level {n}: degeneracy index out of range"
                    )));
                }
            }
            let mut seen = std::collections::HashSet::new();
            for id in &lv.ids {
                if !seen.insert(id.as_str()) {
                    return Err(QcError::Malformed(format!("level {n}: duplicate id {id:?}")));
                }
            }
        }
        let mut desc: Vec<Vec<(u8, Idx)>> =
            levels.iter().map(|lv| vec![(NONDEG, 0); lv.len()]).collect();
        for n in 0..d {
            for (i, s) in levels[n].degens.iter().enumerate() {
                for (y, &x) in s.iter().enumerate() {
                    if desc[n + 1][x as usize].0 == NONDEG {
                        desc[n + 1][x as usize] = (i as u8, y as Idx);
                    }
                }
            }
        }
        let mut x = SSet {
            caches: Caches {
                face_index: (0..levels.len()).map(|_| OnceLock::new()).collect(),
                ..Caches::default()
            },
            levels,
            stable: false,
            desc,
        };
        x.stable = stable && x.top_all_degenerate();
        Ok(x)
    }

    /// Builds a simplicial set from per-level keys with face and degeneracy
    /// functions acting on keys.
    pub(crate) fn from_keys<K, F, S, N>(
        keys: Vec<Vec<K>>,
        face: F,
        degen: S,
        name: N,
        stable: bool,
    ) -> Result<SSet>
    where
        K: Clone + Eq + Hash,
        F: Fn(&K, usize) -> K,
        S: Fn(&K, usize) -> K,
        N: Fn(&K) -> String,
    {
        let d = keys.len() - 1;
        let index: Vec<HashMap<&K, Idx>> = keys
            .iter()
            .map(|lv| lv.iter().enumerate().map(|(i, k)| (k, i as Idx)).collect())
            .collect();
        let mut levels = Vec::with_capacity(keys.len());
        for n in 0..=d {
            let mut lv = Level { ids: keys[n].iter().map(&name).collect(), ..Level::default() };
            if n > 0 {
                for i in 0..=n {
                    let mut col = Vec::with_capacity(keys[n].len());
                    for k in &keys[n] {
                        let f = face(k, i);
                        let j = *index[n - 1].get(&f).ok_or_else(|| {
                            QcError::Malformed(format!("face d{i} at level {n} leaves the set"))
                        })?;
                        col.push(j);
                    }
                    lv.faces.push(col);
                }
            }
            if n < d {
                for i in 0..=n {
                    let mut col = Vec::with_capacity(keys[n].len());
                    for k in &keys[n] {
                        let s = degen(k, i);
                        let j = *index[n + 1].get(&s).ok_or_else(|| {
                            QcError::Malformed(format!("degeneracy s{i} at level {n} leaves the set"))
                        })?;
                        col.push(j);
                    }
                    lv.degens.push(col);
                }
            }
            levels.push(lv);
        }
        SSet::from_levels(levels, stable)
    }

    pub fn trunc_dim(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn is_stable(&self) -> bool {
        self.stable
    }

    pub fn level(&self, n: usize) -> &Level {
        &self.levels[n]
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn len(&self, n: usize) -> usize {
        self.levels.get(n).map_or(0, |l| l.len())
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.len()).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.levels[0].is_empty()
    }

    pub fn id(&self, n: usize, x: Idx) -> &str {
        &self.levels[n].ids[x as usize]
    }

    pub fn face(&self, n: usize, i: usize, x: Idx) -> Idx {
        self.levels[n].faces[i][x as usize]
    }

    pub fn degen(&self, n: usize, i: usize, x: Idx) -> Idx {
        self.levels[n].degens[i][x as usize]
    }

    pub fn faces_of(&self, n: usize, x: Idx) -> Vec<Idx> {
        (0..=n).map(|i| self.face(n, i, x)).collect()
    }

    pub fn is_degenerate(&self, n: usize, x: Idx) -> bool {
        self.desc[n][x as usize].0 != NONDEG
    }

    pub fn nondegenerate(&self, n: usize) -> Vec<Idx> {
        (0..self.len(n) as Idx).filter(|&x| !self.is_degenerate(n, x)).collect()
    }

    pub fn nondegenerate_counts(&self) -> Vec<usize> {
        (0..=self.trunc_dim()).map(|n| self.nondegenerate(n).len()).collect()
    }

    /// Largest dimension holding a nondegenerate simplex, if any.
    pub fn max_nondeg_dim(&self) -> Option<usize> {
        (0..=self.trunc_dim()).rev().find(|&n| !self.nondegenerate(n).is_empty())
    }

    fn top_all_degenerate(&self) -> bool {
        let d = self.trunc_dim();
        d > 0 && (0..self.len(d) as Idx).all(|x| self.is_degenerate(d, x))
            || d == 0 && self.is_empty()
    }

    /// Some `(i, y)` with `x = s_i y`.
    pub fn degeneracy_of(&self, n: usize, x: Idx) -> Option<(usize, Idx)> {
        let (i, y) = self.desc[n][x as usize];
        (i != NONDEG).then_some((i as usize, y))
    }

    pub fn normal_form(&self, n: usize, x: Idx) -> NormalForm {
        let mut chain = Vec::new();
        let (mut m, mut cur) = (n, x);
        while let Some((i, y)) = self.degeneracy_of(m, cur) {
            chain.push(i);
            m -= 1;
            cur = y;
        }
        let mut theta: Vec<usize> = (0..=m).collect();
        for &i in chain.iter().rev() {
            let len = theta.len() + 1;
            theta = (0..len).map(|j| theta[if j <= i { j } else { j - 1 }]).collect();
        }
        NormalForm { root_dim: m, root: cur, surjection: theta }
    }

    /// `theta^* x` for a monotone `theta: [a] -> [n]` given as its value list.
    pub fn apply_operator(&self, n: usize, x: Idx, theta: &[usize]) -> Idx {
        let mut image: Vec<usize> = theta.to_vec();
        image.dedup();
        let mut cur = x;
        let mut m = n;
        for j in (0..=n).rev() {
            if image.binary_search(&j).is_err() {
                cur = self.face(m, j, cur);
                m -= 1;
            }
        }
        for j in 0..theta.len().saturating_sub(1) {
            if theta[j] == theta[j + 1] {
                cur = self.degen(m, j, cur);
                m += 1;
            }
        }
        cur
    }

    /// Applies the degeneracy operator of a monotone surjection `[q] -> [p]`.
    pub fn apply_surjection(&self, p: usize, y: Idx, surj: &[usize]) -> Idx {
        let mut cur = y;
        let mut m = p;
        for j in 0..surj.len().saturating_sub(1) {
            if surj[j] == surj[j + 1] {
                cur = self.degen(m, j, cur);
                m += 1;
            }
        }
        cur
    }

    pub fn vertex(&self, n: usize, x: Idx, j: usize) -> Idx {
        self.apply_operator(n, x, &[j])
    }

    pub fn vertices(&self, n: usize, x: Idx) -> Vec<Idx> {
        (0..=n).map(|j| self.vertex(n, x, j)).collect()
    }

    /// The edge from vertex `i` to vertex `j` of `x`.
    pub fn edge(&self, n: usize, x: Idx, i: usize, j: usize) -> Idx {
        self.apply_operator(n, x, &[i, j])
    }

    /// Looks up an id across all levels.
    pub fn find(&self, id: &str) -> Result<(usize, Idx)> {
        let map = self.caches.ids.get_or_init(|| {
            let mut m = HashMap::new();
            for (n, lv) in self.levels.iter().enumerate() {
                for (x, id) in lv.ids.iter().enumerate() {
                    m.entry(id.clone())
                        .and_modify(|e: &mut (usize, Idx)| e.0 = usize::MAX)
                        .or_insert((n, x as Idx));
                }
            }
            m
        });
        match map.get(id) {
            None => Err(QcError::UnknownId(id.to_string())),
            Some(&(usize::MAX, _)) => {
                Err(QcError::Malformed(format!("id {id:?} occurs at several levels")))
            }
            Some(&p) => Ok(p),
        }
    }

    /// Looks up an id at a given level.
    pub fn find_at(&self, n: usize, id: &str) -> Result<Idx> {
        if let Ok((m, x)) = self.find(id) {
            if m == n {
                return Ok(x);
            }
        }
        self.levels
            .get(n)
            .and_then(|lv| lv.ids.iter().position(|s| s == id))
            .map(|x| x as Idx)
            .ok_or_else(|| QcError::UnknownId(format!("{id} at level {n}")))
    }

    /// Simplices of level `n` whose face tuple equals `faces`.
    pub fn simplices_with_faces(&self, n: usize, faces: &[Idx]) -> &[Idx] {
        let idx = self.caches.face_index[n].get_or_init(|| {
            let mut m: HashMap<Vec<Idx>, Vec<Idx>> = HashMap::new();
            for x in 0..self.len(n) as Idx {
                m.entry(self.faces_of(n, x)).or_default().push(x);
            }
            m
        });
        idx.get(faces).map_or(&[], |v| v.as_slice())
    }

    pub(crate) fn set_coskeletal_hint(&self, k: Option<usize>) {
        let _ = self.caches.coskeletal.set(k);
    }

    /// Smallest `k < trunc_dim` for which the set is `k`-coskeletal, cached.
    pub fn coskeletal_dim(&self) -> Option<usize> {
        *self.caches.coskeletal.get_or_init(|| {
            (0..self.trunc_dim()).find(|&k| ops::is_coskeletal(self, k).unwrap_or(false))
        })
    }

    /// Checks all simplicial identities on the stored levels, plus injectivity
    /// of degeneracies.
    pub fn audit(&self) -> Result<()> {
        let d = self.trunc_dim();
        let bad = |msg: String| Err(QcError::IdentityViolation(msg));
        for n in 0..=d {
            for x in 0..self.len(n) as Idx {
                let id = self.id(n, x);
                if n >= 2 {
                    for j in 1..=n {
                        for i in 0..j {
                            let a = self.face(n - 1, i, self.face(n, j, x));
                            let b = self.face(n - 1, j - 1, self.face(n, i, x));
                            if a != b {
                                return bad(format!("d{i}d{j} != d{}d{i} on {id}", j - 1));
                            }
                        }
                    }
                }
                if n < d {
                    for j in 0..=n {
                        let sx = self.degen(n, j, x);
                        for i in 0..=n + 1 {
                            let lhs = self.face(n + 1, i, sx);
                            let ok = if i < j {
                                n >= 1 && lhs == self.degen(n - 1, j - 1, self.face(n, i, x))
                            } else if i == j || i == j + 1 {
                                lhs == x
                            } else {
                                n >= 1 && lhs == self.degen(n - 1, j, self.face(n, i - 1, x))
                            };
                            if !ok {
                                return bad(format!("d{i}s{j} identity fails on {id}"));
                            }
                        }
                        if n + 1 < d {
                            for i in 0..=j {
                                let a = self.degen(n + 1, i, sx);
                                let b = self.degen(n + 1, j + 1, self.degen(n, i, x));
                                if a != b {
                                    return bad(format!("s{i}s{j} identity fails on {id}"));
                                }
                            }
                        }
                    }
                }
            }
            if n < d {
                for (j, s) in self.levels[n].degens.iter().enumerate() {
                    let mut seen = vec![false; self.len(n + 1)];
                    for &y in s {
                        if std::mem::replace(&mut seen[y as usize], true) {
                            return bad(format!("s{j} is not injective at level {n}"));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Extends a stable set to a larger truncation by freely adding
    /// degenerate simplices.
    pub fn extend_to(&self, new_d: usize) -> Result<SSet> {
        let d = self.trunc_dim();
        if new_d <= d {
            return self.truncate(new_d);
        }
        if !self.stable {
            return Err(QcError::InvalidParameter(
                "only stable sets can be extended past their truncation".into(),
            ));
        }
        // Keys are normal forms (root dim, root, surjection).
        let roots: Vec<(usize, Idx)> = (0..=d)
            .flat_map(|p| self.nondegenerate(p).into_iter().map(move |r| (p, r)))
            .collect();
        let mut keys: Vec<Vec<(usize, Idx, Vec<usize>)>> = Vec::with_capacity(new_d + 1);
        for q in 0..=new_d {
            let mut lv = Vec::new();
            if q <= d {
                for x in 0..self.len(q) as Idx {
                    let nf = self.normal_form(q, x);
                    lv.push((nf.root_dim, nf.root, nf.surjection));
                }
            } else {
                for &(p, r) in &roots {
                    for s in surjections(q, p) {
                        lv.push((p, r, s));
                    }
                }
            }
            keys.push(lv);
        }
        let face = |k: &(usize, Idx, Vec<usize>), i: usize| {
            let (p, r, s) = k;
            let mut t = s.clone();
            let v = t.remove(i);
            if t.contains(&v) {
                (*p, *r, t)
            } else {
                let y = self.face(*p, v, *r);
                let nf = self.normal_form(p - 1, y);
                let lowered: Vec<usize> = t.iter().map(|&w| if w > v { w - 1 } else { w }).collect();
                let comp = lowered.iter().map(|&w| nf.surjection[w]).collect();
                (nf.root_dim, nf.root, comp)
            }
        };
        let degen = |k: &(usize, Idx, Vec<usize>), i: usize| {
            let (p, r, s) = k;
            let mut t = s.clone();
            t.insert(i, s[i]);
            (*p, *r, t)
        };
        let name = |k: &(usize, Idx, Vec<usize>)| {
            let (p, r, s) = k;
            let q = s.len() - 1;
            if q <= d {
                let x = self.apply_surjection(*p, *r, s);
                self.id(q, x).to_string()
            } else {
                let word: Vec<String> = (0..q)
                    .filter(|&j| s[j] == s[j + 1])
                    .map(|j| j.to_string())
                    .collect();
                format!("s{}({})", word.join(","), self.id(*p, *r))
            }
        };
        let out = SSet::from_keys(keys, face, degen, name, true)?;
        if let Some(k) = self.caches.coskeletal.get() {
            out.set_coskeletal_hint(*k);
        }
        Ok(out)
    }

    /// Drops all levels above `new_d`.
    pub fn truncate(&self, new_d: usize) -> Result<SSet> {
        if new_d > self.trunc_dim() {
            return Err(QcError::InvalidParameter("truncate: dimension too large".into()));
        }
        let mut levels: Vec<Level> = self.levels[..=new_d].to_vec();
        levels[new_d].degens.clear();
        let stable = self.stable && self.max_nondeg_dim().is_none_or(|m| m < new_d);
        SSet::from_levels(levels, stable)
    }

    /// Extends or truncates to exactly `new_d`.
    pub fn with_trunc(&self, new_d: usize) -> Result<SSet> {
        match new_d.cmp(&self.trunc_dim()) {
            std::cmp::Ordering::Equal => Ok(self.clone()),
            std::cmp::Ordering::Less => self.truncate(new_d),
            std::cmp::Ordering::Greater => self.extend_to(new_d),
        }
    }

    pub fn into_arc(self) -> Arc<SSet> {
        Arc::new(self)
    }
}

/// All monotone surjections `[q] -> [p]` as value lists, lexicographically.
pub fn surjections(q: usize, p: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize];
    fn rec(q: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == q + 1 {
            if *cur.last().unwrap() == p {
                out.push(cur.clone());
            }
            return;
        }
        let last = *cur.last().unwrap();
        let after = q - cur.len();
        for next in [last, last + 1] {
            if next <= p && p - next <= after {
                cur.push(next);
                rec(q, p, cur, out);
                cur.pop();
            }
        }
    }
    if q >= p {
        rec(q, p, &mut cur, &mut out);
    }
    out
}

/// All monotone maps `[a] -> [n]` as value lists, lexicographically.
pub fn monotone_maps(a: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(a + 1);
    fn rec(a: usize, n: usize, lo: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == a + 1 {
            out.push(cur.clone());
            return;
        }
        for v in lo..=n {
            cur.push(v);
            rec(a, n, v, cur, out);
            cur.pop();
        }
    }
    rec(a, n, 0, &mut cur, &mut out);
    out
}

/// Compact label for a vertex sequence: digits run together below 10 vertices.
pub(crate) fn seq_label(seq: &[usize], wide: bool) -> String {
    if wide {
        seq.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(".")
    } else {
        seq.iter().map(|v| char::from(b'0' + *v as u8)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surjection_counts_are_binomial() {
        // surjections [q] -> [p] number C(q, p)
        for q in 0..7 {
            for p in 0..=q {
                let c = (0..p).fold(1usize, |acc, i| acc * (q - i) / (i + 1));
                assert_eq!(surjections(q, p).len(), c, "q={q} p={p}");
            }
        }
    }

    #[test]
    fn monotone_map_counts() {
        // monotone [a] -> [n]: C(a + n + 1, a + 1)
        assert_eq!(monotone_maps(2, 2).len(), 10);
        assert_eq!(monotone_maps(0, 4).len(), 5);
    }

    #[test]
    fn normal_form_of_delta_simplices() {
        let d = delta(2);
        let x = d.find_at(4, "00122").unwrap();
        let nf = d.normal_form(4, x);
        assert_eq!(nf.root_dim, 2);
        assert_eq!(d.id(2, nf.root), "012");
        assert_eq!(nf.surjection, vec![0, 0, 1, 2, 2]);
        assert_eq!(d.apply_surjection(2, nf.root, &nf.surjection), x);
    }

    #[test]
    fn operators_act_on_vertex_sequences() {
        let d = delta(3);
        let x = d.find_at(3, "0123").unwrap();
        let y = d.apply_operator(3, x, &[1, 1, 3]);
        assert_eq!(d.id(2, y), "113");
        assert_eq!(d.id(1, d.edge(3, x, 0, 2)), "02");
        assert_eq!(d.vertices(3, x).iter().map(|&v| d.id(0, v)).collect::<Vec<_>>(), ["0", "1", "2", "3"]);
    }

    #[test]
    fn extension_matches_direct_construction() {
        let small = delta_trunc(2, 3).unwrap();
        let big = small.extend_to(6).unwrap();
        let direct = delta_trunc(2, 6).unwrap();
        assert_eq!(big.level_sizes(), direct.level_sizes());
        big.audit().unwrap();
        assert!(isomorphic(&big, &direct).unwrap());
    }

    #[test]
    fn unstable_sets_do_not_extend() {
        let e = e_space(&["0", "1"], 3).unwrap();
        assert!(e.extend_to(5).is_err());
    }
}
