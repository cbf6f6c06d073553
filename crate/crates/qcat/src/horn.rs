//! Horns, fillers, fibrancy checks and quasi-isomorphisms.

use crate::error::{QcError, Result};
use crate::homotopy::{ho_category, HoCategory};
use crate::sset::{
    delta_trunc, e_space, enumerate_maps_with, horn_trunc, join, join_map, maps::search_levels, seq_label,
    simplex_map, skeleton, Constraints, EnumOptions, Idx, SMap, SSet, Subcomplex,
};
use serde_json::{json, Value};
use std::collections::{HashMap, HashSet};
use std::sync::{Arc, OnceLock};

/// A horn `Lambda^n_k -> X`.
#[derive(Clone, Debug)]
pub struct HornInstance {
    pub n: usize,
    pub k: usize,
    pub attachment: SMap,
}

fn face_positions(h: &SSet, n: usize, k: usize) -> Result<Vec<Option<Idx>>> {
    (0..=n)
        .map(|j| {
            if j == k {
                return Ok(None);
            }
            let s: Vec<usize> = (0..=n).filter(|&v| v != j).collect();
            h.find_at(n - 1, &seq_label(&s, n >= 10)).map(Some)
        })
        .collect()
}

impl HornInstance {
    pub fn new(n: usize, k: usize, attachment: SMap) -> Result<HornInstance> {
        if k > n || attachment.source().len(0) != n + 1 {
            return Err(QcError::InvalidParameter("horn instance: shape mismatch".into()));
        }
        attachment.validate()?;
        Ok(HornInstance { n, k, attachment })
    }

    /// The horn with the given faces (`faces[k]` is ignored), if they fit together.
    pub fn from_faces(x: &Arc<SSet>, n: usize, k: usize, faces: &[Idx]) -> Result<HornInstance> {
        if faces.len() != n + 1 || n == 0 {
            return Err(QcError::InvalidParameter("horn instance: need n + 1 faces".into()));
        }
        let h = Arc::new(horn_trunc(n, k, n.max(1))?);
        let mut c = Constraints::new();
        for (j, p) in face_positions(&h, n, k)?.into_iter().enumerate() {
            if let Some(p) = p {
                c.insert(n - 1, p, faces[j]);
            }
        }
        let maps = enumerate_maps_with(&h, x, &c, &EnumOptions { limit: Some(1), ..Default::default() })?;
        let attachment = maps
            .into_iter()
            .next()
            .ok_or_else(|| QcError::InvalidParameter("faces do not form a horn".into()))?;
        Ok(HornInstance { n, k, attachment })
    }

    pub fn ambient(&self) -> &Arc<SSet> {
        self.attachment.target()
    }

    /// Image of face `j`, `None` for the missing face.
    pub fn faces(&self) -> Vec<Option<Idx>> {
        let h = self.attachment.source();
        face_positions(h, self.n, self.k)
            .expect("horn faces")
            .into_iter()
            .map(|p| p.map(|p| self.attachment.apply(self.n - 1, p)))
            .collect()
    }

    /// Image of the edge `[i, j]` of the horn.
    pub fn edge(&self, i: usize, j: usize) -> Result<Idx> {
        let h = self.attachment.source();
        let e = h.find_at(1, &seq_label(&[i, j], self.n >= 10))?;
        Ok(self.attachment.apply(1, e))
    }

    pub fn is_inner(&self) -> bool {
        0 < self.k && self.k < self.n
    }

    pub fn to_json(&self) -> Value {
        let x = self.ambient();
        let faces: Vec<Value> = self
            .faces()
            .into_iter()
            .map(|f| f.map_or(Value::Null, |f| json!(x.id(self.n - 1, f))))
            .collect();
        json!({"n": self.n, "k": self.k, "faces": faces})
    }
}

/// All `n`-simplices of `x` whose faces other than `k` match the horn.
pub fn find_fillers(x: &SSet, h: &HornInstance) -> Vec<Idx> {
    let faces = h.faces();
    if h.n > x.trunc_dim() {
        return Vec::new();
    }
    (0..x.len(h.n) as Idx)
        .filter(|&s| faces.iter().enumerate().all(|(j, f)| f.is_none_or(|f| x.face(h.n, j, s) == f)))
        .collect()
}

/// A simplicial set whose inner horns have been checked to fill in
/// dimensions up to `verified_dim`.
#[derive(Debug)]
pub struct QuasiCategory {
    set: Arc<SSet>,
    verified_dim: usize,
    ho: OnceLock<Result<HoCategory>>,
}

impl QuasiCategory {
    pub fn set(&self) -> &Arc<SSet> {
        &self.set
    }

    pub fn verified_dim(&self) -> usize {
        self.verified_dim
    }

    /// The homotopy category, computed once.
    pub fn ho(&self) -> Result<&HoCategory> {
        self.ho.get_or_init(|| ho_category(self)).as_ref().map_err(Clone::clone)
    }
}

#[derive(Debug)]
pub enum Fibrancy {
    Verified(QuasiCategory),
    Failure(HornInstance),
}

/// Searches horns `Lambda^n_k` with `lo <= n <= d` and `k` admitted by `which`;
/// returns the first horn without a filler.
fn first_unfillable(
    x: &Arc<SSet>,
    lo: usize,
    d: usize,
    which: impl Fn(usize, usize) -> bool,
) -> Result<Option<HornInstance>> {
    if d > x.trunc_dim() {
        return Err(QcError::InvalidParameter(format!(
            "cannot check dimension {d} above truncation {}",
            x.trunc_dim()
        )));
    }
    let opts = EnumOptions::default();
    for n in lo.max(1)..=d {
        for k in (0..=n).filter(|&k| which(n, k)) {
            let h = Arc::new(horn_trunc(n, k, n)?);
            let pos = face_positions(&h, n, k)?;
            let index: HashSet<Vec<Idx>> = (0..x.len(n) as Idx)
                .map(|s| {
                    let mut f = x.faces_of(n, s);
                    f.remove(k);
                    f
                })
                .collect();
            let mut bad: Option<Vec<Vec<Idx>>> = None;
            search_levels(&h, x, &Constraints::new(), &opts, |levels| {
                let key: Vec<Idx> = pos.iter().flatten().map(|&p| levels[n - 1][p as usize]).collect();
                if index.contains(&key) {
                    true
                } else {
                    bad = Some(levels.to_vec());
                    false
                }
            })?;
            if let Some(levels) = bad {
                let attachment = SMap::new(h.clone(), x.clone(), levels)?;
                return Ok(Some(HornInstance { n, k, attachment }));
            }
        }
    }
    Ok(None)
}

/// Checks every inner horn of dimension at most `d`.
pub fn is_inner_fibrant_up_to(x: &Arc<SSet>, d: usize) -> Result<Fibrancy> {
    Ok(match first_unfillable(x, 2, d, |n, k| 0 < k && k < n)? {
        Some(h) => Fibrancy::Failure(h),
        None => Fibrancy::Verified(QuasiCategory { set: x.clone(), verified_dim: d, ho: OnceLock::new() }),
    })
}

/// Like [`is_inner_fibrant_up_to`], failing with `NotVerifiedQuasiCategory`.
pub fn verify_quasi_category(x: &Arc<SSet>, d: usize) -> Result<QuasiCategory> {
    match is_inner_fibrant_up_to(x, d)? {
        Fibrancy::Verified(q) => Ok(q),
        Fibrancy::Failure(h) => Err(QcError::NotVerifiedQuasiCategory(format!(
            "horn Lambda^{}_{} with faces {} has no filler",
            h.n,
            h.k,
            h.to_json()["faces"]
        ))),
    }
}

/// The first horn of any kind, dimension at most `d`, without a filler.
pub fn kan_failure_up_to(x: &Arc<SSet>, d: usize) -> Result<Option<HornInstance>> {
    first_unfillable(x, 1, d, |_, _| true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuasiIsoMode {
    Providers,
    Sk2E1,
    Ho,
}

impl std::str::FromStr for QuasiIsoMode {
    type Err = QcError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "providers" => Ok(QuasiIsoMode::Providers),
            "sk2e1" => Ok(QuasiIsoMode::Sk2E1),
            "ho" => Ok(QuasiIsoMode::Ho),
            _ => Err(QcError::InvalidParameter(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct QuasiIsoWitness {
    pub edge: Idx,
    /// `tau` with `d_2 tau = f`, `d_1 tau` degenerate at the source.
    pub left_provider: Option<Idx>,
    /// `sigma` with `d_0 sigma = f`, `d_1 sigma` degenerate at the target.
    pub right_provider: Option<Idx>,
    pub sk2e1_extension: Option<SMap>,
}

#[derive(Clone, Debug)]
pub enum QuasiIsoVerdict {
    Yes(QuasiIsoWitness),
    No,
    Unknown,
}

impl QuasiIsoVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, QuasiIsoVerdict::Yes(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            QuasiIsoVerdict::Yes(_) => "yes",
            QuasiIsoVerdict::No => "no",
            QuasiIsoVerdict::Unknown => "unknown",
        }
    }
}

/// Where a question about edges is asked: any simplicial set, or one with
/// verified inner fibrancy.
#[derive(Clone, Copy, Debug)]
pub enum Ambient<'a> {
    Plain(&'a Arc<SSet>),
    Verified(&'a QuasiCategory),
}

impl<'a> Ambient<'a> {
    pub fn set(&self) -> &'a Arc<SSet> {
        match self {
            Ambient::Plain(x) => x,
            Ambient::Verified(q) => q.set(),
        }
    }
}

impl<'a> From<&'a QuasiCategory> for Ambient<'a> {
    fn from(q: &'a QuasiCategory) -> Self {
        Ambient::Verified(q)
    }
}

impl<'a> From<&'a Arc<SSet>> for Ambient<'a> {
    fn from(x: &'a Arc<SSet>) -> Self {
        Ambient::Plain(x)
    }
}

/// Left and right inverse providers of an edge, least index first.
pub fn providers(x: &SSet, f: Idx) -> (Option<Idx>, Option<Idx>) {
    let (a, b) = (x.face(1, 1, f), x.face(1, 0, f));
    let (ida, idb) = (x.degen(0, 0, a), x.degen(0, 0, b));
    let mut left = None;
    let mut right = None;
    for s in 0..x.len(2) as Idx {
        let [d0, d1, d2] = [0, 1, 2].map(|i| x.face(2, i, s));
        if left.is_none() && d2 == f && d1 == ida {
            left = Some(s);
        }
        if right.is_none() && d0 == f && d1 == idb {
            right = Some(s);
        }
        if left.is_some() && right.is_some() {
            break;
        }
    }
    (left, right)
}

/// The 2-skeleton of `E^1`, truncated at `d`.
pub fn sk2_e1(d: usize) -> Result<Arc<SSet>> {
    let e = Arc::new(e_space(&["0", "1"], d.max(3))?);
    Ok(Arc::new(skeleton(&e, 2)?))
}

fn sk2e1_extension(x: &Arc<SSet>, f: Idx) -> Result<Option<SMap>> {
    let s = sk2_e1(x.trunc_dim())?;
    let e = s.find_at(1, "01")?;
    let c = Constraints::new().fix(1, e, f);
    let maps = enumerate_maps_with(&s, x, &c, &EnumOptions { limit: Some(1), ..Default::default() })?;
    Ok(maps.into_iter().next())
}

/// Decides whether an edge is a quasi-isomorphism. Without verified fibrancy
/// a missing witness gives `Unknown`.
pub fn quasi_iso(ambient: Ambient<'_>, f: Idx, mode: QuasiIsoMode) -> Result<QuasiIsoVerdict> {
    let x = ambient.set();
    if x.trunc_dim() < 2 || f as usize >= x.len(1) {
        return Err(QcError::InvalidParameter("edge out of range or no 2-simplices stored".into()));
    }
    let absent = match ambient {
        Ambient::Plain(_) => QuasiIsoVerdict::Unknown,
        Ambient::Verified(_) => QuasiIsoVerdict::No,
    };
    let witness = |sk: Option<SMap>| {
        let (l, r) = providers(x, f);
        QuasiIsoWitness { edge: f, left_provider: l, right_provider: r, sk2e1_extension: sk }
    };
    match mode {
        QuasiIsoMode::Providers => {
            let w = witness(None);
            Ok(if w.left_provider.is_some() && w.right_provider.is_some() { QuasiIsoVerdict::Yes(w) } else { absent })
        }
        QuasiIsoMode::Sk2E1 => Ok(match sk2e1_extension(x, f)? {
            Some(ext) => QuasiIsoVerdict::Yes(witness(Some(ext))),
            None => absent,
        }),
        QuasiIsoMode::Ho => {
            let Ambient::Verified(q) = ambient else {
                return Err(QcError::NotVerifiedQuasiCategory("mode ho needs verified inner fibrancy".into()));
            };
            let h = q.ho()?;
            Ok(if h.is_invertible(f) { QuasiIsoVerdict::Yes(witness(None)) } else { QuasiIsoVerdict::No })
        }
    }
}

/// Fills a special outer horn: `k = 0` with `[0,1]` a quasi-isomorphism, or
/// `k = n` with `[n-1,n]` one. With `over = (p, base)` the filler must also
/// lie over `base`.
pub fn special_horn_lift(
    ambient: Ambient<'_>,
    h: &HornInstance,
    over: Option<(&SMap, Idx)>,
) -> Result<Option<Idx>> {
    let (n, k) = (h.n, h.k);
    if n < 2 || (k != 0 && k != n) {
        return Err(QcError::InvalidParameter(format!("Lambda^{n}_{k} is not an outer horn of dimension >= 2")));
    }
    let edge = if k == 0 { h.edge(0, 1)? } else { h.edge(n - 1, n)? };
    let x = ambient.set();
    let gate = match ambient {
        Ambient::Verified(_) => quasi_iso(ambient, edge, QuasiIsoMode::Ho)?,
        Ambient::Plain(_) => quasi_iso(ambient, edge, QuasiIsoMode::Providers)?,
    };
    if !gate.is_yes() {
        return Err(QcError::PreconditionNotQuasiIso(x.id(1, edge).to_string()));
    }
    let filler = find_fillers(x, h).into_iter().find(|&s| over.is_none_or(|(p, b)| p.apply(n, s) == b));
    if filler.is_none() && over.is_none() {
        if let Ambient::Verified(q) = ambient {
            if q.verified_dim() >= n {
                return Err(QcError::TheoremViolation(format!(
                    "special horn Lambda^{n}_{k} with faces {} has no filler",
                    h.to_json()["faces"]
                )));
            }
        }
    }
    Ok(filler)
}

/// The subcomplex of simplices all of whose edges are quasi-isomorphisms,
/// with its inclusion.
pub fn j_subcomplex(q: &QuasiCategory) -> Result<(Arc<SSet>, SMap)> {
    let x = q.set();
    let h = q.ho()?;
    let iso: Vec<bool> = (0..x.len(1) as Idx).map(|e| h.is_invertible(e)).collect();
    let keep = |n: usize, a: Idx| {
        (0..=n).all(|i| (i + 1..=n).all(|j| n == 0 || iso[x.edge(n, a, i, j) as usize]))
    };
    Subcomplex::from_predicate(x, keep)?.to_sset(x)
}

/// The slice `X_{/K}` over `k: K -> X`, truncated at `d`: level `n` is the set
/// of maps `Delta^n * K -> X` extending `k`.
pub fn slice(k: &SMap, d: usize) -> Result<SSet> {
    let (kk, x) = (k.source(), k.target());
    if d > x.trunc_dim() {
        return Err(QcError::InvalidParameter("slice truncation exceeds the target".into()));
    }
    // joins Delta^n * K at one common truncation, so keys line up across levels
    let dt = kk.trunc_dim().max(d + 2);
    let kk = &if kk.is_stable() { Arc::new(kk.with_trunc(dt)?) } else { kk.clone() };
    let mut joins: Vec<Arc<SSet>> = Vec::with_capacity(d + 2);
    let mut simplices: Vec<Arc<SSet>> = Vec::with_capacity(d + 2);
    for n in 0..=d + 1 {
        let s = Arc::new(delta_trunc(n, dt)?);
        joins.push(Arc::new(join(&s, kk)?));
        simplices.push(s);
    }
    let mut keys: Vec<Vec<Vec<Vec<Idx>>>> = Vec::with_capacity(d + 1);
    let mut names: HashMap<Vec<Vec<Idx>>, String> = HashMap::new();
    for (n, jn) in joins.iter().enumerate().take(d + 1) {
        let mut c = Constraints::new();
        for l in 0..=kk.trunc_dim().min(jn.trunc_dim()).min(k.top()) {
            for y in 0..kk.len(l) as Idx {
                let pos = jn.find_at(l, &format!("<;{}>", kk.id(l, y)))?;
                c.insert(l, pos, k.apply(l, y));
            }
        }
        let top: Vec<usize> = (0..=n).collect();
        let whole = jn.find_at(n, &format!("<{};>", seq_label(&top, n >= 10)))?;
        let mut seen: HashMap<Idx, usize> = HashMap::new();
        let mut level = Vec::new();
        for m in enumerate_maps_with(jn, x, &c, &EnumOptions::default())? {
            let img = m.apply(n, whole);
            let i = seen.entry(img).or_insert(0);
            names.insert(m.levels().to_vec(), format!("{}:{}", x.id(n, img), i));
            *i += 1;
            level.push(m.levels().to_vec());
        }
        keys.push(level);
    }
    let id_k = SMap::identity(kk);
    let along = |theta: &[usize], a: usize, b: usize| -> SMap {
        let s = simplex_map(&simplices[a], &simplices[b], theta).expect("monotone");
        join_map(&s, &id_k, &joins[a], &joins[b]).expect("join map")
    };
    let level_of = |key: &Vec<Vec<Idx>>| -> usize { key[0].len() - kk.len(0) - 1 };
    let precompose = |key: &Vec<Vec<Idx>>, g: &SMap| -> Vec<Vec<Idx>> {
        g.levels()
            .iter()
            .enumerate()
            .take(key.len())
            .map(|(l, col)| col.iter().map(|&a| key[l][a as usize]).collect())
            .collect()
    };
    let face = |key: &Vec<Vec<Idx>>, i: usize| {
        let n = level_of(key);
        let theta: Vec<usize> = (0..n).map(|v| if v < i { v } else { v + 1 }).collect();
        precompose(key, &along(&theta, n - 1, n))
    };
    let degen = |key: &Vec<Vec<Idx>>, i: usize| {
        let n = level_of(key);
        let theta: Vec<usize> = (0..=n + 1).map(|v| if v <= i { v } else { v - 1 }).collect();
        precompose(key, &along(&theta, n + 1, n))
    };
    let name = |key: &Vec<Vec<Idx>>| names[key].clone();
    SSet::from_keys(keys, face, degen, name, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{codiscrete, cyclic_group, nerve, poset};
    use crate::sset::{boundary_trunc, delta, empty, isomorphic, point};

    #[test]
    fn boundary_of_triangle_fails_inner_horn() {
        let b = Arc::new(boundary_trunc(2, 3).unwrap());
        match is_inner_fibrant_up_to(&b, 2).unwrap() {
            Fibrancy::Failure(h) => {
                assert_eq!((h.n, h.k), (2, 1));
                assert!(find_fillers(&b, &h).is_empty());
            }
            Fibrancy::Verified(_) => panic!("boundary is not a quasi-category"),
        }
    }

    #[test]
    fn nerve_horns_fill_uniquely() {
        let x = Arc::new(nerve(&poset(2), 4).unwrap());
        assert!(matches!(is_inner_fibrant_up_to(&x, 4).unwrap(), Fibrancy::Verified(_)));
        let f = x.find_at(1, "01").unwrap();
        let g = x.find_at(1, "12").unwrap();
        let h = HornInstance::from_faces(&x, 2, 1, &[g, 0, f]).unwrap();
        assert_eq!(find_fillers(&x, &h).len(), 1);
    }

    #[test]
    fn outer_horn_without_filler() {
        // edges 0->1 and 0->2 in the disjoint union of two intervals sharing 0:
        // nothing goes from 1 to 2
        let x = Arc::new(nerve(&poset(2), 3).unwrap());
        let f = x.find_at(1, "01").unwrap();
        let g = x.find_at(1, "02").unwrap();
        let h = HornInstance::from_faces(&x, 2, 0, &[0, g, f]).unwrap();
        assert_eq!(find_fillers(&x, &h).len(), 1);
    }

    #[test]
    fn degenerate_edges_are_quasi_isos() {
        let x = Arc::new(delta(2));
        let e = x.find_at(1, "11").unwrap();
        assert!(quasi_iso(Ambient::Plain(&x), e, QuasiIsoMode::Providers).unwrap().is_yes());
        let f = x.find_at(1, "01").unwrap();
        assert!(matches!(quasi_iso(Ambient::Plain(&x), f, QuasiIsoMode::Providers).unwrap(), QuasiIsoVerdict::Unknown));
        assert!(quasi_iso(Ambient::Plain(&x), f, QuasiIsoMode::Ho).is_err());
    }

    #[test]
    fn group_edges_are_quasi_isos_in_all_modes() {
        let x = Arc::new(nerve(&cyclic_group(3), 4).unwrap());
        let q = verify_quasi_category(&x, 3).unwrap();
        for e in 0..x.len(1) as Idx {
            for mode in [QuasiIsoMode::Providers, QuasiIsoMode::Sk2E1, QuasiIsoMode::Ho] {
                assert!(quasi_iso(Ambient::Verified(&q), e, mode).unwrap().is_yes());
            }
        }
    }

    #[test]
    fn special_horn_gate() {
        let x = Arc::new(nerve(&poset(2), 4).unwrap());
        let q = verify_quasi_category(&x, 3).unwrap();
        let f = x.find_at(1, "01").unwrap();
        let g = x.find_at(1, "02").unwrap();
        let h = HornInstance::from_faces(&x, 2, 0, &[0, g, f]).unwrap();
        assert!(matches!(
            special_horn_lift(Ambient::Verified(&q), &h, None),
            Err(QcError::PreconditionNotQuasiIso(_))
        ));
        let z = Arc::new(nerve(&cyclic_group(2), 4).unwrap());
        let qz = verify_quasi_category(&z, 3).unwrap();
        let gz = z.find_at(1, "g").unwrap();
        let ez = z.find_at(1, "e").unwrap();
        let h = HornInstance::from_faces(&z, 2, 0, &[0, ez, gz]).unwrap();
        assert!(special_horn_lift(Ambient::Verified(&qz), &h, None).unwrap().is_some());
    }

    #[test]
    fn j_of_simplex_is_discrete() {
        let x = Arc::new(nerve(&poset(2), 4).unwrap());
        let q = verify_quasi_category(&x, 3).unwrap();
        let (j, _) = j_subcomplex(&q).unwrap();
        assert_eq!(j.nondegenerate_counts()[..2], [3, 0]);
        let g = Arc::new(nerve(&codiscrete(&["a", "b"]), 4).unwrap());
        let q = verify_quasi_category(&g, 3).unwrap();
        let (j, _) = j_subcomplex(&q).unwrap();
        assert_eq!(j.level_sizes(), g.level_sizes());
    }

    #[test]
    fn slices() {
        let x = Arc::new(delta(2).truncate(4).unwrap());
        let e = Arc::new(empty(4));
        let none = SMap::new(e.clone(), x.clone(), (0..=4).map(|_| Vec::new()).collect()).unwrap();
        let s = slice(&none, 3).unwrap();
        assert!(isomorphic(&s, &x.truncate(3).unwrap()).unwrap());

        // objects over 2 in [2] are all of 0, 1, 2; over 1 only 0 and 1
        let pt = Arc::new(point().truncate(4).unwrap());
        let at = |v: &str| {
            let levels = (0..=4).map(|n| vec![x.find_at(n, &v.repeat(n + 1)).unwrap()]).collect();
            SMap::new(pt.clone(), x.clone(), levels).unwrap()
        };
        let s = slice(&at("2"), 3).unwrap();
        assert!(isomorphic(&s, &delta(2).truncate(3).unwrap()).unwrap());
        let s = slice(&at("1"), 3).unwrap();
        assert!(isomorphic(&s, &delta(1).truncate(3).unwrap()).unwrap());
    }
}
