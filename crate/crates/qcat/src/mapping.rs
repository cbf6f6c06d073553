//! Cosimplicial interval objects and the mapping-space models built from
//! them: maps out of a resolution of `Delta^1` into a bi-pointed simplicial
//! set, relative mapping spaces over `E^n`, and the necklace model.

use crate::anodyne::{verify, AnodyneCertificate, Check};
use crate::category::{nerve, FinCat, Morphism};
use crate::error::{QcError, Result};
use crate::sset::{
    e_space, e_space_map, enumerate_maps, monotone_maps, prism_label, product, product_map,
    seq_label, Constraints, Idx, Level, SMap, SSet, Subcomplex,
};
use serde::Serialize;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

/// The four resolutions of the interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Model {
    R,
    L,
    #[serde(rename = "cyl")]
    Cyl,
    E,
}

impl Model {
    pub const ALL: [Model; 4] = [Model::R, Model::L, Model::Cyl, Model::E];
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::R => "R",
            Model::L => "L",
            Model::Cyl => "cyl",
            Model::E => "E",
        })
    }
}

impl FromStr for Model {
    type Err = QcError;

    fn from_str(s: &str) -> Result<Model> {
        match s.to_ascii_lowercase().as_str() {
            "r" => Ok(Model::R),
            "l" => Ok(Model::L),
            "cyl" => Ok(Model::Cyl),
            "e" => Ok(Model::E),
            _ => Err(QcError::InvalidParameter(format!("unknown model {s:?}"))),
        }
    }
}

// A simplex of C^n as a vertex sequence; the flag is the Delta^1 coordinate
// (always 0 for R and L).
type VKey = Vec<(usize, u8)>;

fn normalize(kind: Model, n: usize, mut key: VKey) -> VKey {
    let collapse = match kind {
        Model::R => key.iter().all(|&(v, _)| v <= n),
        Model::L => key.iter().all(|&(v, _)| v >= 1),
        Model::Cyl | Model::E => key.iter().all(|&(_, t)| t == key[0].1),
    };
    if collapse {
        let v = if kind == Model::L { 1 } else { 0 };
        for p in &mut key {
            p.0 = v;
        }
    }
    key
}

fn tuples(k: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t: Vec<usize>| {
                (0..k).map(move |v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

fn level_keys(kind: Model, n: usize, q: usize) -> Vec<VKey> {
    let raw: Vec<VKey> = match kind {
        Model::R | Model::L => monotone_maps(q, n + 1)
            .into_iter()
            .map(|s| s.into_iter().map(|v| (v, 0)).collect())
            .collect(),
        Model::Cyl | Model::E => {
            let ss = if kind == Model::Cyl { monotone_maps(q, n) } else { tuples(n + 1, q + 1) };
            let mut out = Vec::new();
            for t in monotone_maps(q, 1) {
                for s in &ss {
                    out.push(s.iter().zip(&t).map(|(&v, &b)| (v, b as u8)).collect());
                }
            }
            out
        }
    };
    let mut seen = std::collections::HashSet::new();
    raw.into_iter().map(|k| normalize(kind, n, k)).filter(|k| seen.insert(k.clone())).collect()
}

fn key_label(kind: Model, n: usize, key: &VKey) -> String {
    let s: Vec<usize> = key.iter().map(|p| p.0).collect();
    match kind {
        Model::R | Model::L => seq_label(&s, n + 1 >= 10),
        Model::Cyl | Model::E => {
            let t: Vec<usize> = key.iter().map(|p| p.1 as usize).collect();
            prism_label(&s, &t, n >= 10)
        }
    }
}

/// `theta: [a] -> [b]` acting on a key of `C^a`.
fn act(kind: Model, theta: &[usize], b: usize, key: &VKey) -> VKey {
    let a = theta.len() - 1;
    let out = key
        .iter()
        .map(|&(v, t)| match kind {
            Model::R => (if v <= a { theta[v] } else { b + 1 }, 0),
            Model::L => (if v == 0 { 0 } else { theta[v - 1] + 1 }, 0),
            Model::Cyl | Model::E => (theta[v], t),
        })
        .collect();
    normalize(kind, b, out)
}

fn coface_op(n: usize, i: usize) -> Vec<usize> {
    (0..n).map(|v| if v < i { v } else { v + 1 }).collect()
}

fn codegen_op(n: usize, i: usize) -> Vec<usize> {
    (0..=n + 1).map(|v| if v <= i { v } else { v - 1 }).collect()
}

#[derive(Clone, Debug)]
struct Keyed {
    set: Arc<SSet>,
    keys: Vec<Vec<VKey>>,
    index: Vec<HashMap<VKey, Idx>>,
}

fn keyed(kind: Model, n: usize, d: usize) -> Result<Keyed> {
    let keys: Vec<Vec<VKey>> = (0..=d).map(|q| level_keys(kind, n, q)).collect();
    let set = SSet::from_keys(
        keys.clone(),
        |k, i| {
            let mut k = k.clone();
            k.remove(i);
            normalize(kind, n, k)
        },
        |k, i| {
            let mut u = k.clone();
            u.insert(i, k[i]);
            u
        },
        |k| key_label(kind, n, k),
        true,
    )?;
    let index = keys
        .iter()
        .map(|lv| lv.iter().enumerate().map(|(i, k)| (k.clone(), i as Idx)).collect())
        .collect();
    Ok(Keyed { set: Arc::new(set), keys, index })
}

fn keyed_map(src: &Keyed, tgt: &Keyed, f: impl Fn(&VKey) -> VKey) -> Result<SMap> {
    let top = src.set.trunc_dim().min(tgt.set.trunc_dim());
    let mut levels = Vec::with_capacity(top + 1);
    for q in 0..=top {
        let col = src.keys[q]
            .iter()
            .map(|k| {
                tgt.index[q]
                    .get(&f(k))
                    .copied()
                    .ok_or_else(|| QcError::InvalidParameter("cosimplicial operator leaves the target".into()))
            })
            .collect::<Result<Vec<Idx>>>()?;
        levels.push(col);
    }
    SMap::new(src.set.clone(), tgt.set.clone(), levels)
}

/// A cosimplicial simplicial set under `dDelta^1`, stored up to degree `m`.
#[derive(Clone, Debug)]
pub struct CosimplicialInterval {
    pub kind: Model,
    pub degree_bound: usize,
    pub objects: Vec<Arc<SSet>>,
    /// `cofaces[n][i]: C^{n-1} -> C^n`; `cofaces[0]` is empty.
    pub cofaces: Vec<Vec<SMap>>,
    /// `codegens[n][i]: C^{n+1} -> C^n` for `n < m`.
    pub codegens: Vec<Vec<SMap>>,
    /// The two ends of each `C^n`, as vertex indices.
    pub basepoints: Vec<(Idx, Idx)>,
    keyed: Vec<Keyed>,
}

/// Builds `C^0 .. C^m`, each truncated at `d`.
pub fn cosimplicial_interval(kind: Model, m: usize, d: usize) -> Result<CosimplicialInterval> {
    if d == 0 {
        return Err(QcError::InvalidParameter("interval objects need truncation at least 1".into()));
    }
    let keyed: Vec<Keyed> = (0..=m).map(|n| keyed(kind, n, d)).collect::<Result<_>>()?;
    let mut cofaces = vec![Vec::new()];
    for n in 1..=m {
        let row = (0..=n)
            .map(|i| {
                let th = coface_op(n, i);
                keyed_map(&keyed[n - 1], &keyed[n], |k| act(kind, &th, n, k))
            })
            .collect::<Result<_>>()?;
        cofaces.push(row);
    }
    let mut codegens = Vec::new();
    for n in 0..m {
        let row = (0..=n)
            .map(|i| {
                let th = codegen_op(n, i);
                keyed_map(&keyed[n + 1], &keyed[n], |k| act(kind, &th, n, k))
            })
            .collect::<Result<_>>()?;
        codegens.push(row);
    }
    let basepoints = (0..=m)
        .map(|n| {
            let far = match kind {
                Model::R => (n + 1, 0),
                Model::L => (1, 0),
                Model::Cyl | Model::E => (0, 1),
            };
            (keyed[n].index[0][&vec![(0, 0)]], keyed[n].index[0][&vec![far]])
        })
        .collect();
    Ok(CosimplicialInterval {
        kind,
        degree_bound: m,
        objects: keyed.iter().map(|k| k.set.clone()).collect(),
        cofaces,
        codegens,
        basepoints,
        keyed,
    })
}

fn same(f: &SMap, g: &SMap) -> bool {
    f.key() == g.key()
}

fn image_mask(f: &SMap) -> Vec<Vec<bool>> {
    f.image().mask().to_vec()
}

impl CosimplicialInterval {
    /// Checks the cosimplicial identities, two vertices per object, and that
    /// the latching maps are monomorphisms: cofaces are injective and two
    /// coface images meet exactly in the image of the common double coface.
    pub fn audit(&self) -> Check {
        let m = self.degree_bound;
        let fail = |detail: String| Check { holds: false, detail };
        for (n, x) in self.objects.iter().enumerate() {
            if x.len(0) != 2 {
                return fail(format!("C^{n} has {} vertices", x.len(0)));
            }
            if x.audit().is_err() {
                return fail(format!("C^{n} fails the simplicial identities"));
            }
        }
        let comp = |f: &SMap, g: &SMap| f.then(g).expect("composable cosimplicial maps");
        for n in 2..=m {
            for j in 0..=n {
                for i in 0..j {
                    let lhs = comp(&self.cofaces[n - 1][i], &self.cofaces[n][j]);
                    let rhs = comp(&self.cofaces[n - 1][j - 1], &self.cofaces[n][i]);
                    if !same(&lhs, &rhs) {
                        return fail(format!("coface identity fails at degree {n}, i={i}, j={j}"));
                    }
                }
            }
        }
        for n in 0..m.saturating_sub(1) {
            for j in 0..=n {
                for i in 0..=j {
                    let lhs = comp(&self.codegens[n + 1][j + 1], &self.codegens[n][i]);
                    let rhs = comp(&self.codegens[n + 1][i], &self.codegens[n][j]);
                    if !same(&lhs, &rhs) {
                        return fail(format!("codegeneracy identity fails at degree {n}, i={i}, j={j}"));
                    }
                }
            }
        }
        for n in 0..m {
            for j in 0..=n {
                for i in 0..=n + 1 {
                    // sigma^j delta^i : C^n -> C^{n+1} -> C^n
                    let lhs = comp(&self.cofaces[n + 1][i], &self.codegens[n][j]);
                    let ok = if i == j || i == j + 1 {
                        lhs.key().iter().all(|col| col.iter().enumerate().all(|(x, &y)| y == x as Idx))
                            && lhs.key().len() == self.objects[n].trunc_dim() + 1
                    } else if i < j {
                        same(&lhs, &comp(&self.codegens[n - 1][j - 1], &self.cofaces[n][i]))
                    } else {
                        same(&lhs, &comp(&self.codegens[n - 1][j], &self.cofaces[n][i - 1]))
                    };
                    if !ok {
                        return fail(format!("mixed identity fails at degree {n}, i={i}, j={j}"));
                    }
                }
            }
        }
        if self.basepoints[0].0 == self.basepoints[0].1 {
            return fail("ends of C^0 coincide".into());
        }
        for n in 1..=m {
            for f in &self.cofaces[n] {
                if !f.is_injective() {
                    return fail(format!("a coface into C^{n} is not injective"));
                }
            }
            for j in 1..=n {
                for i in 0..j {
                    let a = image_mask(&self.cofaces[n][i]);
                    let b = image_mask(&self.cofaces[n][j]);
                    let both = if n >= 2 {
                        image_mask(&comp(&self.cofaces[n - 1][i], &self.cofaces[n][j]))
                    } else {
                        // the two ends
                        let mut mk: Vec<Vec<bool>> = a.iter().map(|l| vec![false; l.len()]).collect();
                        let x = &self.objects[n];
                        let (p, q) = self.basepoints[n];
                        let ends = Subcomplex::generated(x, &[(0, p), (0, q)]);
                        for (lv, row) in mk.iter_mut().enumerate() {
                            for (s, v) in row.iter_mut().enumerate() {
                                *v = ends.contains(lv, s as Idx);
                            }
                        }
                        mk
                    };
                    let meet: Vec<Vec<bool>> = a
                        .iter()
                        .zip(&b)
                        .map(|(u, v)| u.iter().zip(v).map(|(&p, &q)| p && q).collect())
                        .collect();
                    if meet != both {
                        return fail(format!("latching map at degree {n} is not injective (faces {i}, {j})"));
                    }
                }
            }
        }
        Check { holds: true, detail: format!("{} objects, identities and latching checked", m + 1) }
    }
}

/// A simplicial set whose `n`-simplices are simplicial maps out of the
/// `n`-th object of a cosimplicial object, plus the maps themselves.
#[derive(Clone, Debug)]
pub struct MapSpace {
    pub set: Arc<SSet>,
    pub(crate) tables: Vec<Vec<Vec<Vec<Idx>>>>,
    index: Vec<HashMap<Vec<Vec<Idx>>, Idx>>,
}

impl MapSpace {
    /// Value tables of the map behind simplex `j` at level `n`.
    pub fn table(&self, n: usize, j: Idx) -> &[Vec<Idx>] {
        &self.tables[n][j as usize]
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.set.level_sizes()
    }
}

fn precompose(f: &[Vec<Idx>], g: &SMap) -> Vec<Vec<Idx>> {
    let top = (f.len() - 1).min(g.top());
    (0..=top).map(|q| g.key()[q].iter().map(|&y| f[q][y as usize]).collect()).collect()
}

fn assemble(
    objects: &[Arc<SSet>],
    cofaces: &[Vec<SMap>],
    codegens: &[Vec<SMap>],
    x: &Arc<SSet>,
    constraints: &[Constraints],
    label: impl Fn(usize, usize, &[Vec<Idx>]) -> String,
) -> Result<MapSpace> {
    let m = objects.len() - 1;
    let mut tables = Vec::with_capacity(m + 1);
    let mut index = Vec::with_capacity(m + 1);
    for n in 0..=m {
        let maps = enumerate_maps(&objects[n], x, &constraints[n])?;
        let t: Vec<Vec<Vec<Idx>>> = maps.iter().map(|f| f.key().to_vec()).collect();
        index.push(t.iter().enumerate().map(|(j, k)| (k.clone(), j as Idx)).collect::<HashMap<_, _>>());
        tables.push(t);
    }
    let look = |n: usize, k: &Vec<Vec<Idx>>| -> Result<Idx> {
        index[n]
            .get(k)
            .copied()
            .ok_or_else(|| QcError::InvalidParameter(format!("precomposition leaves level {n}")))
    };
    let mut levels = Vec::with_capacity(m + 1);
    for n in 0..=m {
        let mut lv = Level {
            ids: tables[n].iter().enumerate().map(|(j, t)| label(n, j, t)).collect(),
            ..Level::default()
        };
        if n > 0 {
            for d in &cofaces[n] {
                lv.faces.push(tables[n].iter().map(|t| look(n - 1, &precompose(t, d))).collect::<Result<_>>()?);
            }
        }
        if n < m {
            for s in &codegens[n] {
                lv.degens.push(tables[n].iter().map(|t| look(n + 1, &precompose(t, s))).collect::<Result<_>>()?);
            }
        }
        levels.push(lv);
    }
    let set = SSet::from_levels(levels, false)?;
    Ok(MapSpace { set: Arc::new(set), tables, index })
}

/// Extends a stable set so that it is stored at least up to `need`.
pub(crate) fn prepared(s: &Arc<SSet>, need: usize) -> Result<Arc<SSet>> {
    if s.trunc_dim() < need && s.is_stable() {
        Ok(Arc::new(s.extend_to(need)?))
    } else {
        Ok(s.clone())
    }
}

fn coskeletal_bound(s: &SSet, what: &str) -> Result<usize> {
    s.coskeletal_dim().ok_or_else(|| {
        QcError::UnsupportedEnumeration(format!("{what} needs a coskeletal target"))
    })
}

/// One of the four models of the mapping space between two vertices.
#[derive(Clone, Debug)]
pub struct HomModel {
    pub kind: Model,
    pub a: Idx,
    pub b: Idx,
    pub max_dim: usize,
    /// Truncation of the interval objects.
    pub trunc: usize,
    pub interval: CosimplicialInterval,
    pub space: MapSpace,
}

impl HomModel {
    pub fn set(&self) -> &Arc<SSet> {
        &self.space.set
    }
}

/// Truncation used for the interval objects of `kind` when mapping into `s`.
fn model_trunc(kind: Model, s: &SSet, m: usize, d: usize) -> Result<usize> {
    match kind {
        Model::E => {
            let k = coskeletal_bound(s, "the E model")?;
            let t = d.min(k + 1);
            if t < k {
                return Err(QcError::InvalidParameter(format!(
                    "E-direction truncation {d} is below the coskeletal bound {k}"
                )));
            }
            Ok(t)
        }
        _ => Ok((m + 2).min(s.trunc_dim()).max(1)),
    }
}

/// The simplicial set of maps `C^n -> S` sending the ends to `a` and `b`,
/// up to level `m`. `d` bounds the E direction.
pub fn hom_model(kind: Model, s: &Arc<SSet>, a: &str, b: &str, m: usize, d: usize) -> Result<HomModel> {
    let s = prepared(s, m + 2)?;
    let (a, b) = (s.find_at(0, a)?, s.find_at(0, b)?);
    hom_model_idx(kind, &s, a, b, m, d)
}

pub(crate) fn hom_model_idx(kind: Model, s: &Arc<SSet>, a: Idx, b: Idx, m: usize, d: usize) -> Result<HomModel> {
    let t = model_trunc(kind, s, m, d)?;
    let interval = cosimplicial_interval(kind, m, t)?;
    let constraints: Vec<Constraints> = interval
        .basepoints
        .iter()
        .map(|&(p, q)| Constraints::new().fix(0, p, a).fix(0, q, b))
        .collect();
    // Finite models are named by the images of their top simplices.
    let tops: Vec<Option<(usize, Vec<Idx>)>> = interval
        .objects
        .iter()
        .map(|c| {
            let top = c.max_nondeg_dim()?;
            (kind != Model::E && top <= c.trunc_dim()).then(|| (top, c.nondegenerate(top)))
        })
        .collect();
    let space = assemble(&interval.objects, &interval.cofaces, &interval.codegens, s, &constraints, |n, j, t| {
        match &tops[n] {
            Some((q, xs)) if *q < t.len() => {
                xs.iter().map(|&x| s.id(*q, t[*q][x as usize])).collect::<Vec<_>>().join(",")
            }
            _ => format!("{n}.{j}"),
        }
    })?;
    Ok(HomModel { kind, a, b, max_dim: m, trunc: t, interval, space })
}

/// The models and the comparison maps between them. All maps land in the
/// cylinder model: `Hom^R` and `Hom^L` by precomposing with the retractions
/// of `C_cyl` onto `C_R` and `C_L`, `Hom^E` by restriction along
/// `C_cyl ⊂ C_E`.
#[derive(Clone, Debug)]
pub struct Comparisons {
    pub r: HomModel,
    pub l: HomModel,
    pub cyl: HomModel,
    pub e: Option<HomModel>,
    pub r_to_cyl: SMap,
    pub l_to_cyl: SMap,
    pub e_to_cyl: Option<SMap>,
}

fn induced(
    from: &HomModel,
    to: &HomModel,
    along: impl Fn(usize) -> Result<SMap>,
    cut: usize,
) -> Result<SMap> {
    let m = from.max_dim;
    let mut levels = Vec::with_capacity(m + 1);
    for n in 0..=m {
        let g = along(n)?;
        let lookup: HashMap<Vec<Vec<Idx>>, Idx> = to.space.tables[n]
            .iter()
            .enumerate()
            .map(|(j, t)| (t[..=cut.min(t.len() - 1)].to_vec(), j as Idx))
            .collect();
        let col = from.space.tables[n]
            .iter()
            .map(|t| {
                let mut k = precompose(t, &g);
                k.truncate(cut + 1);
                lookup
                    .get(&k)
                    .copied()
                    .ok_or_else(|| QcError::InvalidParameter(format!("comparison leaves level {n}")))
            })
            .collect::<Result<Vec<Idx>>>()?;
        levels.push(col);
    }
    SMap::new(from.space.set.clone(), to.space.set.clone(), levels)
}

/// All models of the mapping space from `a` to `b` with their comparison
/// maps. The E model is skipped when `s` is not coskeletal.
pub fn comparison_maps(s: &Arc<SSet>, a: &str, b: &str, m: usize, d: usize) -> Result<Comparisons> {
    let s = prepared(s, m + 2)?;
    let (ai, bi) = (s.find_at(0, a)?, s.find_at(0, b)?);
    let r = hom_model_idx(Model::R, &s, ai, bi, m, d)?;
    let l = hom_model_idx(Model::L, &s, ai, bi, m, d)?;
    let cyl = hom_model_idx(Model::Cyl, &s, ai, bi, m, d)?;
    let e = match hom_model_idx(Model::E, &s, ai, bi, m, d) {
        Ok(e) => Some(e),
        Err(QcError::UnsupportedEnumeration(_)) => None,
        Err(err) => return Err(err),
    };
    let full = cyl.trunc;
    let r_to_cyl = induced(
        &r,
        &cyl,
        |n| {
            keyed_map(&cyl.interval.keyed[n], &r.interval.keyed[n], |k| {
                let out = k.iter().map(|&(v, t)| (if t == 0 { v } else { n + 1 }, 0)).collect();
                normalize(Model::R, n, out)
            })
        },
        full,
    )?;
    let l_to_cyl = induced(
        &l,
        &cyl,
        |n| {
            keyed_map(&cyl.interval.keyed[n], &l.interval.keyed[n], |k| {
                let out = k.iter().map(|&(v, t)| (if t == 0 { 0 } else { v + 1 }, 0)).collect();
                normalize(Model::L, n, out)
            })
        },
        full,
    )?;
    let e_to_cyl = match &e {
        Some(e) => Some(induced(
            e,
            &cyl,
            |n| keyed_map(&keyed(Model::Cyl, n, e.trunc)?, &e.interval.keyed[n], |k| k.clone()),
            e.trunc.min(full),
        )?),
        None => None,
    };
    Ok(Comparisons { r, l, cyl, e, r_to_cyl, l_to_cyl, e_to_cyl })
}

/// Values of a map defined on a subcomplex, indexed by the ambient.
pub type Boundary<'a> = &'a dyn Fn(usize, Idx) -> Idx;

/// A relative mapping space: maps `B x E^n -> X` whose restriction to
/// `A x E^n` factors through the projection to `A` followed by `f`.
#[derive(Clone, Debug)]
pub struct RelSpace {
    pub space: MapSpace,
    /// `B` at the truncation used.
    pub base: Arc<SSet>,
    pub trunc: usize,
    fibers: Vec<Arc<SSet>>,
}

impl RelSpace {
    pub fn set(&self) -> &Arc<SSet> {
        &self.space.set
    }
}

fn lift_sub(sub: &Subcomplex, old: &SSet, new: &SSet) -> Result<Subcomplex> {
    Subcomplex::from_predicate(new, |q, x| {
        let nf = new.normal_form(q, x);
        nf.root_dim <= old.trunc_dim() && sub.contains(nf.root_dim, nf.root)
    })
}

fn rel_trunc(x: &SSet, d: usize) -> Result<(usize, usize)> {
    let k = coskeletal_bound(x, "a relative mapping space")?;
    let t = d.min(k + 1);
    if t < k {
        return Err(QcError::InvalidParameter(format!(
            "E-direction truncation {d} is below the coskeletal bound {k}"
        )));
    }
    Ok((k, t))
}

fn base_at(b: &Arc<SSet>, t: usize) -> Result<Arc<SSet>> {
    if b.trunc_dim() == t {
        return Ok(b.clone());
    }
    if b.trunc_dim() < t && !b.is_stable() {
        return Err(QcError::InvalidParameter(format!(
            "the base is stored only up to {} and is not stable",
            b.trunc_dim()
        )));
    }
    Ok(Arc::new(b.with_trunc(t)?))
}

/// `Map_A(B, X)` relative to `f: A -> X`, for `A ⊂ B` and a coskeletal `X`.
/// `f` is given on the simplices of `A` by their ambient indices.
pub fn rel_map_space(
    b: &Arc<SSet>,
    a: &Subcomplex,
    x: &Arc<SSet>,
    f: Boundary<'_>,
    m: usize,
    d: usize,
) -> Result<RelSpace> {
    let (k, t) = rel_trunc(x, d)?;
    let bp = base_at(b, t)?;
    let ap = lift_sub(a, b, &bp)?;
    let low = k.min(b.trunc_dim());
    rel_core(&bp, &ap, x, &|q, y| if q <= low { Some(f(q, y)) } else { None }, m, t)
}

fn rel_core(
    b: &Arc<SSet>,
    a: &Subcomplex,
    x: &Arc<SSet>,
    f: &dyn Fn(usize, Idx) -> Option<Idx>,
    m: usize,
    t: usize,
) -> Result<RelSpace> {
    let labels: Vec<Vec<String>> = (0..=m + 1).map(|n| (0..=n).map(|v| v.to_string()).collect()).collect();
    let fibers: Vec<Arc<SSet>> =
        (0..=m).map(|n| e_space(&labels[n], t).map(Arc::new)).collect::<Result<_>>()?;
    let objects: Vec<Arc<SSet>> =
        fibers.iter().map(|e| product(b, e).map(Arc::new)).collect::<Result<_>>()?;
    let id = SMap::identity(b);
    let mut cofaces = vec![Vec::new()];
    for n in 1..=m {
        let row = (0..=n)
            .map(|i| {
                let g = e_space_map(&fibers[n - 1], &fibers[n], &coface_op(n, i))?;
                product_map(&id, &g, &objects[n - 1], &objects[n])
            })
            .collect::<Result<_>>()?;
        cofaces.push(row);
    }
    let mut codegens = Vec::new();
    for n in 0..m {
        let row = (0..=n)
            .map(|i| {
                let g = e_space_map(&fibers[n + 1], &fibers[n], &codegen_op(n, i))?;
                product_map(&id, &g, &objects[n + 1], &objects[n])
            })
            .collect::<Result<_>>()?;
        codegens.push(row);
    }
    let mut constraints = Vec::with_capacity(m + 1);
    for n in 0..=m {
        let mut c = Constraints::new();
        for q in 0..=t {
            let w = fibers[n].len(q) as Idx;
            for y in 0..b.len(q) as Idx {
                if !a.contains(q, y) {
                    continue;
                }
                if let Some(v) = f(q, y) {
                    for e in 0..w {
                        c.insert(q, y * w + e, v);
                    }
                }
            }
        }
        constraints.push(c);
    }
    let space = assemble(&objects, &cofaces, &codegens, x, &constraints, |n, j, _| format!("{n}.{j}"))?;
    Ok(RelSpace { space, base: b.clone(), trunc: t, fibers })
}

/// Restriction `Map(B, X) -> Map(B', X)` along `emb`, the levelwise
/// embedding of the base of `to` into the base of `from`.
fn restrict(from: &RelSpace, to: &RelSpace, emb: &[Vec<Idx>]) -> Result<SMap> {
    let m = from.space.tables.len() - 1;
    let mut levels = Vec::with_capacity(m + 1);
    for n in 0..=m {
        let e = &from.fibers[n];
        let col = from.space.tables[n]
            .iter()
            .map(|h| {
                let k: Vec<Vec<Idx>> = (0..h.len())
                    .map(|q| {
                        let w = e.len(q) as Idx;
                        let mut row = Vec::with_capacity(emb[q].len() * w as usize);
                        for &y in &emb[q] {
                            for z in 0..w {
                                row.push(h[q][(y * w + z) as usize]);
                            }
                        }
                        row
                    })
                    .collect();
                to.space.index[n]
                    .get(&k)
                    .copied()
                    .ok_or_else(|| QcError::InvalidParameter(format!("restriction leaves level {n}")))
            })
            .collect::<Result<Vec<Idx>>>()?;
        levels.push(col);
    }
    SMap::new(from.space.set.clone(), to.space.set.clone(), levels)
}

/// Composite embedding: `inner` into the ambient, expressed in the indices
/// of `outer` (both given by their inclusions into the same ambient).
fn embedding(inner: &SMap, outer: &SMap) -> Result<Vec<Vec<Idx>>> {
    (0..=inner.top())
        .map(|q| {
            let pos: HashMap<Idx, Idx> =
                outer.key()[q].iter().enumerate().map(|(i, &y)| (y, i as Idx)).collect();
            inner.key()[q]
                .iter()
                .map(|y| pos.get(y).copied().ok_or_else(|| QcError::NotSubcomplex("not nested".into())))
                .collect()
        })
        .collect()
}

struct Piece {
    space: RelSpace,
    incl: SMap,
}

fn piece(bp: &Arc<SSet>, sub: &Subcomplex, a: &Subcomplex, x: &Arc<SSet>, f: Boundary<'_>, low: usize, m: usize, t: usize) -> Result<Piece> {
    let (set, incl) = sub.to_sset(bp)?;
    let a_sub = a.preimage(&incl);
    let g = |q: usize, y: Idx| if q <= low { Some(f(q, incl.apply(q, y))) } else { None };
    let space = rel_core(&set, &a_sub, x, &g, m, t)?;
    Ok(Piece { space, incl })
}

/// Outcome of [`relative_pullback_check`].
#[derive(Clone, Debug, Serialize)]
pub struct PullbackReport {
    pub holds: bool,
    /// Per level: sizes of the corner, the two sides, the intersection, and
    /// of the fibre product.
    pub levels: Vec<[usize; 5]>,
    pub detail: String,
}

/// Checks that restriction makes
/// `Map_A(B) -> Map_{A∩B1}(B1) x_{Map_{A∩B12}(B12)} Map_{A∩B2}(B2)` a levelwise
/// bijection up to level `m`, where `B = B1 ∪ B2` and `B12 = B1 ∩ B2`.
#[allow(clippy::too_many_arguments)]
pub fn relative_pullback_check(
    b: &Arc<SSet>,
    a: &Subcomplex,
    b1: &Subcomplex,
    b2: &Subcomplex,
    x: &Arc<SSet>,
    f: Boundary<'_>,
    m: usize,
    d: usize,
) -> Result<PullbackReport> {
    if b1.union(b2) != Subcomplex::full(b) {
        return Err(QcError::InvalidParameter("the two pieces do not cover the base".into()));
    }
    let (k, t) = rel_trunc(x, d)?;
    let bp = base_at(b, t)?;
    let lift = |s: &Subcomplex| lift_sub(s, b, &bp);
    let (a, b1, b2) = (lift(a)?, lift(b1)?, lift(b2)?);
    let low = k.min(b.trunc_dim());
    let whole = Piece { space: rel_core(&bp, &a, x, &|q, y| (q <= low).then(|| f(q, y)), m, t)?, incl: SMap::identity(&bp) };
    let p1 = piece(&bp, &b1, &a, x, f, low, m, t)?;
    let p2 = piece(&bp, &b2, &a, x, f, low, m, t)?;
    let p12 = piece(&bp, &b1.intersection(&b2), &a, x, f, low, m, t)?;
    let r1 = restrict(&whole.space, &p1.space, &embedding(&p1.incl, &whole.incl)?)?;
    let r2 = restrict(&whole.space, &p2.space, &embedding(&p2.incl, &whole.incl)?)?;
    let s1 = restrict(&p1.space, &p12.space, &embedding(&p12.incl, &p1.incl)?)?;
    let s2 = restrict(&p2.space, &p12.space, &embedding(&p12.incl, &p2.incl)?)?;
    let mut levels = Vec::new();
    let mut bad = None;
    for n in 0..=m {
        let mut pairs = std::collections::HashSet::new();
        for u in 0..p1.space.space.set.len(n) as Idx {
            for v in 0..p2.space.space.set.len(n) as Idx {
                if s1.apply(n, u) == s2.apply(n, v) {
                    pairs.insert((u, v));
                }
            }
        }
        let images: Vec<(Idx, Idx)> =
            (0..whole.space.space.set.len(n) as Idx).map(|h| (r1.apply(n, h), r2.apply(n, h))).collect();
        let distinct: std::collections::HashSet<_> = images.iter().copied().collect();
        let ok = distinct.len() == images.len() && distinct == pairs;
        levels.push([
            whole.space.space.set.len(n),
            p1.space.space.set.len(n),
            p2.space.space.set.len(n),
            p12.space.space.set.len(n),
            pairs.len(),
        ]);
        if !ok && bad.is_none() {
            bad = Some(n);
        }
    }
    Ok(match bad {
        None => PullbackReport { holds: true, levels, detail: format!("strict pullback up to level {m}") },
        Some(n) => PullbackReport { holds: false, levels, detail: format!("not a pullback at level {n}") },
    })
}

/// Outcome of [`latching_fibration_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum LatchingVerdict {
    /// The latching map is not a monomorphism, so nothing is claimed.
    NotApplicable { reason: String },
    /// Every checked lifting problem has a solution.
    Fibration { max_dim: usize, problems: usize, acyclic: bool },
    /// A lifting problem without solution: dimension and horn index, or no
    /// index for a boundary.
    Failed { dim: usize, k: Option<usize> },
}

/// The first lifting problem `p` cannot solve against horns of dimension
/// `1..=r_max` (and boundaries of dimension `0..=r_max` when `boundary`).
/// Returns the number of problems checked on success.
pub fn lifting_failure(p: &SMap, r_max: usize, boundary: bool) -> std::result::Result<usize, (usize, Option<usize>)> {
    let (mm, nn) = (p.source(), p.target());
    let r_max = r_max.min(p.top());
    let pre: Vec<HashMap<Idx, Vec<Idx>>> = (0..=r_max)
        .map(|q| {
            let mut h: HashMap<Idx, Vec<Idx>> = HashMap::new();
            for x in 0..mm.len(q) as Idx {
                h.entry(p.apply(q, x)).or_default().push(x);
            }
            h
        })
        .collect();
    let none: Vec<Idx> = Vec::new();
    let mut count = 0;
    if boundary {
        for y in 0..nn.len(0) as Idx {
            count += 1;
            if !pre[0].contains_key(&y) {
                return Err((0, None));
            }
        }
    }
    for r in 1..=r_max {
        let mut shapes: Vec<Option<usize>> = (0..=r).map(Some).collect();
        if boundary {
            shapes.push(None);
        }
        for y in 0..nn.len(r) as Idx {
            let want: Vec<&Vec<Idx>> =
                (0..=r).map(|i| pre[r - 1].get(&nn.face(r, i, y)).unwrap_or(&none)).collect();
            let lifts = pre[r].get(&y).unwrap_or(&none);
            for &k in &shapes {
                let idx: Vec<usize> = (0..=r).filter(|&i| Some(i) != k).collect();
                let mut chosen: Vec<Idx> = Vec::with_capacity(idx.len());
                let mut ok = true;
                fn rec(
                    mm: &SSet,
                    r: usize,
                    idx: &[usize],
                    want: &[&Vec<Idx>],
                    lifts: &[Idx],
                    chosen: &mut Vec<Idx>,
                    count: &mut usize,
                ) -> bool {
                    let pos = chosen.len();
                    if pos == idx.len() {
                        *count += 1;
                        return lifts.iter().any(|&x| idx.iter().zip(chosen.iter()).all(|(&i, &c)| mm.face(r, i, x) == c));
                    }
                    let j = idx[pos];
                    for &c in want[j] {
                        let fits = idx[..pos].iter().zip(chosen.iter()).all(|(&i, &xi)| {
                            // i < j: d_i x_j = d_{j-1} x_i
                            r < 2 || mm.face(r - 1, i, c) == mm.face(r - 1, j - 1, xi)
                        });
                        if fits {
                            chosen.push(c);
                            let good = rec(mm, r, idx, want, lifts, chosen, count);
                            chosen.pop();
                            if !good {
                                return false;
                            }
                        }
                    }
                    true
                }
                ok &= rec(mm, r, &idx, &want, lifts, &mut chosen, &mut count);
                if !ok {
                    return Err((r, k));
                }
            }
        }
    }
    Ok(count)
}

/// For `A ⊂ B` inside `A' ⊂ B'` (all subcomplexes of the ambient `B'`, with
/// `f` defined on `A'`), checks the restriction
/// `Map_{A'}(B', X) -> Map_A(B, X)` for the right lifting property against
/// horns up to `r_max`. The latching map `B ∪_A A' -> B'` is a monomorphism
/// exactly when `A = A' ∩ B`; otherwise the verdict is not-applicable. When a
/// certificate for `B ∪ A' ⊂ B'` is given and verifies, boundaries are
/// checked as well.
#[allow(clippy::too_many_arguments)]
pub fn latching_fibration_check(
    big: &Arc<SSet>,
    a_big: &Subcomplex,
    b_small: &Subcomplex,
    a_small: &Subcomplex,
    x: &Arc<SSet>,
    f: Boundary<'_>,
    cert: Option<&AnodyneCertificate>,
    m: usize,
    r_max: usize,
    d: usize,
) -> Result<LatchingVerdict> {
    if !a_small.is_subset(b_small) || !a_small.is_subset(a_big) {
        return Ok(LatchingVerdict::NotApplicable { reason: "A is not a subcomplex of both B and A'".into() });
    }
    if *a_small != a_big.intersection(b_small) {
        return Ok(LatchingVerdict::NotApplicable {
            reason: "A differs from A' ∩ B, so the latching map is not injective".into(),
        });
    }
    let acyclic = match cert {
        None => false,
        Some(c) => {
            let latch = a_big.union(b_small);
            let start = Subcomplex::from_ids(&c.ambient, &c.start.iter().map(String::as_str).collect::<Vec<_>>())?;
            let ids_match = c.ambient.level_sizes() == big.level_sizes()[..c.ambient.trunc_dim() + 1]
                && start.mask().iter().zip(latch.mask()).all(|(u, v)| u == v);
            if !ids_match || !verify(c).is_valid() {
                return Ok(LatchingVerdict::NotApplicable {
                    reason: "certificate does not verify for the latching inclusion".into(),
                });
            }
            true
        }
    };
    let (k, t) = rel_trunc(x, d)?;
    let bp = base_at(big, t)?;
    let lift = |s: &Subcomplex| lift_sub(s, big, &bp);
    let (ab, bs, as_) = (lift(a_big)?, lift(b_small)?, lift(a_small)?);
    let low = k.min(big.trunc_dim());
    let total = Piece { space: rel_core(&bp, &ab, x, &|q, y| (q <= low).then(|| f(q, y)), m, t)?, incl: SMap::identity(&bp) };
    let part = piece(&bp, &bs, &as_, x, f, low, m, t)?;
    let p = restrict(&total.space, &part.space, &embedding(&part.incl, &total.incl)?)?;
    Ok(match lifting_failure(&p, r_max.min(m), acyclic) {
        Ok(problems) => LatchingVerdict::Fibration { max_dim: r_max.min(m), problems, acyclic },
        Err((dim, k)) => LatchingVerdict::Failed { dim, k },
    })
}

/// `Delta^1 x Delta^1` relative to `dDelta^1 x Delta^1`, mapped to `x` by the
/// edges `g0` (over `0`) and `g1` (over `1`), with the two triangles `S`
/// (through `(0,1)`) and `T` (through `(1,0)`).
#[derive(Clone, Debug)]
pub struct SquareConfig {
    pub base: Arc<SSet>,
    pub a: Subcomplex,
    pub s: Subcomplex,
    pub t: Subcomplex,
    values: Vec<Vec<Idx>>,
}

impl SquareConfig {
    pub fn new(x: &Arc<SSet>, g0: Idx, g1: Idx, d: usize) -> Result<SquareConfig> {
        let i = crate::sset::delta_trunc(1, d)?;
        let base = Arc::new(product(&i, &i)?);
        let a = Subcomplex::from_predicate(&base, |q, p| {
            let w = i.len(q) as Idx;
            let v = i.vertices(q, p / w);
            v.iter().all(|&u| u == v[0])
        })?;
        let top = d.min(x.trunc_dim());
        let values = (0..=top)
            .map(|q| {
                let w = i.len(q) as Idx;
                (0..base.len(q) as Idx)
                    .map(|p| {
                        if !a.contains(q, p) {
                            return Idx::MAX;
                        }
                        let g = if i.vertex(q, p / w, 0) == 0 { g0 } else { g1 };
                        let theta: Vec<usize> = i.vertices(q, p % w).iter().map(|&u| u as usize).collect();
                        x.apply_operator(1, g, &theta)
                    })
                    .collect()
            })
            .collect();
        let s = Subcomplex::from_ids(&base, &["(001,011)"])?;
        let t = Subcomplex::from_ids(&base, &["(011,001)"])?;
        Ok(SquareConfig { base, a, s, t, values })
    }

    pub fn f(&self, q: usize, y: Idx) -> Idx {
        self.values[q][y as usize]
    }
}

/// A wedge of simplices glued end to end. No beads means `Delta^0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Necklace {
    pub beads: Vec<usize>,
}

impl Necklace {
    pub fn new(beads: Vec<usize>) -> Result<Necklace> {
        if beads.contains(&0) {
            return Err(QcError::InvalidParameter("beads have dimension at least 1".into()));
        }
        Ok(Necklace { beads })
    }

    pub fn vertex_count(&self) -> usize {
        1 + self.beads.iter().sum::<usize>()
    }

    /// First vertex of every bead, then the last vertex.
    pub fn joints(&self) -> Vec<usize> {
        let mut out = vec![0];
        for &b in &self.beads {
            out.push(out.last().unwrap() + b);
        }
        out
    }

    /// Bead containing the vertex interval `[lo, hi]`.
    pub fn bead_of(&self, lo: usize, hi: usize) -> Option<usize> {
        let j = self.joints();
        (0..self.beads.len()).find(|&i| j[i] <= lo && hi <= j[i + 1])
    }

    /// The necklace inside its associated simplex, truncated at `d`.
    pub fn realize(&self, d: usize) -> Result<(Arc<SSet>, Subcomplex)> {
        let simplex = Arc::new(crate::sset::delta_trunc(self.vertex_count() - 1, d)?);
        let j = self.joints();
        let gens: Vec<(usize, Idx)> = (0..self.beads.len())
            .map(|i| {
                let id = seq_label(&(j[i]..=j[i + 1]).collect::<Vec<_>>(), self.vertex_count() > 10);
                simplex.find_at(self.beads[i], &id).map(|x| (self.beads[i], x))
            })
            .collect::<Result<_>>()?;
        let gens = if gens.is_empty() { vec![(0, 0)] } else { gens };
        Ok((simplex.clone(), Subcomplex::generated(&simplex, &gens)))
    }

    /// The spine: successor edges of the associated simplex.
    pub fn spine(&self, d: usize) -> Result<(Arc<SSet>, Subcomplex)> {
        let n = self.vertex_count() - 1;
        let simplex = Arc::new(crate::sset::delta_trunc(n, d.max(1))?);
        let wide = n + 1 > 10;
        let gens: Vec<(usize, Idx)> = if n == 0 {
            vec![(0, 0)]
        } else {
            (0..n).map(|v| simplex.find_at(1, &seq_label(&[v, v + 1], wide)).map(|x| (1, x))).collect::<Result<_>>()?
        };
        Ok((simplex.clone(), Subcomplex::generated(&simplex, &gens)))
    }
}

fn compositions(total: usize) -> Vec<Vec<usize>> {
    if total == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=total {
        for mut rest in compositions(total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// The nerve of the category of necklaces over `s` with at most `v`
/// vertices, from `a` to `b`, truncated at `m`.
#[derive(Clone, Debug)]
pub struct NecklaceModel {
    pub set: Arc<SSet>,
    pub category: FinCat,
    pub max_vertices: usize,
    pub max_dim: usize,
}

/// Builds the necklace model. Objects are necklaces `T` with a map to `s`
/// sending the ends to `a` and `b`; morphisms are endpoint-preserving maps of
/// necklaces over `s`. `Delta^0` appears only when `a = b`.
pub fn necklace_model(s: &Arc<SSet>, a: &str, b: &str, v: usize, m: usize) -> Result<NecklaceModel> {
    if v == 0 {
        return Err(QcError::InvalidParameter("a necklace has at least one vertex".into()));
    }
    let s = prepared(s, v)?;
    let (a, b) = (s.find_at(0, a)?, s.find_at(0, b)?);
    if s.trunc_dim() + 1 < v {
        return Err(QcError::InvalidParameter(format!("the target is stored only up to {}", s.trunc_dim())));
    }
    // objects: (necklace, simplex per bead)
    let mut objects: Vec<(Necklace, Vec<Idx>)> = Vec::new();
    if a == b {
        objects.push((Necklace { beads: Vec::new() }, Vec::new()));
    }
    for total in 1..v {
        for beads in compositions(total) {
            let mut partial: Vec<Vec<Idx>> = vec![Vec::new()];
            for (i, &nb) in beads.iter().enumerate() {
                let last = i + 1 == beads.len();
                let mut next = Vec::new();
                for pre in &partial {
                    let start = pre.last().map_or(a, |&y| s.vertex(beads[i - 1], y, beads[i - 1]));
                    for y in 0..s.len(nb) as Idx {
                        if s.vertex(nb, y, 0) == start && (!last || s.vertex(nb, y, nb) == b) {
                            let mut t = pre.clone();
                            t.push(y);
                            next.push(t);
                        }
                    }
                }
                partial = next;
            }
            for sig in partial {
                objects.push((Necklace { beads: beads.clone() }, sig));
            }
        }
    }
    let obj_name = |(t, sig): &(Necklace, Vec<Idx>)| -> String {
        if t.beads.is_empty() {
            return format!("<{}>", s.id(0, a));
        }
        let parts: Vec<&str> = t.beads.iter().zip(sig).map(|(&n, &y)| s.id(n, y)).collect();
        format!("<{}>", parts.join(";"))
    };
    // morphisms: endpoint-preserving vertex maps sending beads into beads
    let mut morphisms: Vec<Morphism> = Vec::new();
    let mut maps: Vec<Vec<usize>> = Vec::new();
    let mut lookup: HashMap<(usize, usize, Vec<usize>), usize> = HashMap::new();
    for (i, (t, sig)) in objects.iter().enumerate() {
        let p = t.vertex_count() - 1;
        let tj = t.joints();
        for (j, (u, tau)) in objects.iter().enumerate() {
            let q = u.vertex_count() - 1;
            let uj = u.joints();
            for phi in monotone_maps(p, q) {
                if phi[0] != 0 || phi[p] != q {
                    continue;
                }
                let mut ok = true;
                for (bi, &nb) in t.beads.iter().enumerate() {
                    let (lo, hi) = (phi[tj[bi]], phi[tj[bi + 1]]);
                    let restricted: Vec<usize> = (tj[bi]..=tj[bi + 1]).map(|w| phi[w]).collect();
                    let got = if u.beads.is_empty() {
                        s.apply_operator(0, a, &vec![0; nb + 1])
                    } else {
                        match u.bead_of(lo, hi) {
                            None => {
                                ok = false;
                                break;
                            }
                            Some(c) => {
                                let theta: Vec<usize> = restricted.iter().map(|&w| w - uj[c]).collect();
                                s.apply_operator(u.beads[c], tau[c], &theta)
                            }
                        }
                    };
                    if got != sig[bi] {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    let name = format!("{i}>{j}:{}", seq_label(&phi, q >= 10));
                    lookup.insert((i, j, phi.clone()), morphisms.len());
                    morphisms.push(Morphism { name, src: i, dst: j });
                    maps.push(phi);
                }
            }
        }
    }
    let identity: Vec<usize> = objects
        .iter()
        .enumerate()
        .map(|(i, (t, _))| lookup[&(i, i, (0..t.vertex_count()).collect())])
        .collect();
    let mut table = Vec::new();
    for (f, mf) in morphisms.iter().enumerate() {
        for (g, mg) in morphisms.iter().enumerate() {
            if mf.dst == mg.src {
                let comp: Vec<usize> = maps[f].iter().map(|&w| maps[g][w]).collect();
                let h = lookup.get(&(mf.src, mg.dst, comp)).copied().ok_or_else(|| {
                    QcError::InvalidParameter("necklace maps are not closed under composition".into())
                })?;
                table.push((g, f, h));
            }
        }
    }
    let names = objects.iter().map(obj_name).collect();
    let category = FinCat::new(names, morphisms, identity, &table)?;
    let set = nerve(&category, m)?;
    Ok(NecklaceModel { set: Arc::new(set), category, max_vertices: v, max_dim: m })
}
