use super::{Idx, SSet, Subcomplex};
use crate::error::{QcError, Result};
use std::collections::HashMap;
use std::sync::Arc;

/// A simplicial map, stored levelwise up to the smaller truncation.
#[derive(Clone, Debug)]
pub struct SMap {
    source: Arc<SSet>,
    target: Arc<SSet>,
    levels: Vec<Vec<Idx>>,
}

impl PartialEq for SMap {
    fn eq(&self, other: &Self) -> bool {
        self.levels == other.levels
            && (Arc::ptr_eq(&self.source, &other.source) || self.source == other.source)
            && (Arc::ptr_eq(&self.target, &other.target) || self.target == other.target)
    }
}

impl SMap {
    pub(crate) fn from_parts(source: Arc<SSet>, target: Arc<SSet>, levels: Vec<Vec<Idx>>) -> SMap {
        SMap { source, target, levels }
    }

    /// Builds a map from levelwise assignments and checks that it commutes
    /// with faces and degeneracies.
    pub fn new(source: Arc<SSet>, target: Arc<SSet>, levels: Vec<Vec<Idx>>) -> Result<SMap> {
        let top = source.trunc_dim().min(target.trunc_dim());
        if levels.len() != top + 1 {
            return Err(QcError::Malformed(format!("map needs {} levels", top + 1)));
        }
        for (n, col) in levels.iter().enumerate() {
            if col.len() != source.len(n) || col.iter().any(|&y| y as usize >= target.len(n)) {
                return Err(QcError::Malformed(format!("map level {n} has the wrong shape")));
            }
        }
        let f = SMap { source, target, levels };
        f.validate()?;
        Ok(f)
    }

    pub fn identity(x: &Arc<SSet>) -> SMap {
        let levels = (0..=x.trunc_dim()).map(|n| (0..x.len(n) as Idx).collect()).collect();
        SMap { source: x.clone(), target: x.clone(), levels }
    }

    pub fn validate(&self) -> Result<()> {
        let (x, y) = (&self.source, &self.target);
        let top = self.top();
        for n in 0..=top {
            for a in 0..x.len(n) as Idx {
                let fa = self.apply(n, a);
                if n > 0 {
                    for i in 0..=n {
                        if self.apply(n - 1, x.face(n, i, a)) != y.face(n, i, fa) {
                            return Err(QcError::IdentityViolation(format!(
                                "map does not commute with d{i} on {}",
                                x.id(n, a)
                            )));
                        }
                    }
                }
                if n < top {
                    for i in 0..=n {
                        if self.apply(n + 1, x.degen(n, i, a)) != y.degen(n, i, fa) {
                            return Err(QcError::IdentityViolation(format!(
                                "map does not commute with s{i} on {}",
                                x.id(n, a)
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &Arc<SSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SSet> {
        &self.target
    }

    pub fn levels(&self) -> &[Vec<Idx>] {
        &self.levels
    }

    /// Highest level on which the map is stored.
    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn apply(&self, n: usize, x: Idx) -> Idx {
        self.levels[n][x as usize]
    }

    /// `g . self`.
    pub fn then(&self, g: &SMap) -> Result<SMap> {
        if self.target.level_sizes()[..=self.top().min(g.top())]
            != g.source.level_sizes()[..=self.top().min(g.top())]
        {
            return Err(QcError::InvalidParameter("composition: target and source differ".into()));
        }
        let top = self.top().min(g.top());
        let levels = (0..=top)
            .map(|n| self.levels[n].iter().map(|&y| g.apply(n, y)).collect())
            .collect();
        Ok(SMap { source: self.source.clone(), target: g.target.clone(), levels })
    }

    pub fn is_injective(&self) -> bool {
        self.levels.iter().enumerate().all(|(n, col)| {
            let mut seen = vec![false; self.target.len(n)];
            col.iter().all(|&y| !std::mem::replace(&mut seen[y as usize], true))
        })
    }

    pub fn is_surjective(&self) -> bool {
        self.levels.iter().enumerate().all(|(n, col)| {
            let mut seen = vec![false; self.target.len(n)];
            for &y in col {
                seen[y as usize] = true;
            }
            seen.into_iter().all(|b| b)
        })
    }

    pub fn is_bijective(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    pub fn image(&self) -> Subcomplex {
        let mut mask: Vec<Vec<bool>> =
            (0..=self.target.trunc_dim()).map(|n| vec![false; self.target.len(n)]).collect();
        for (n, col) in self.levels.iter().enumerate() {
            for &y in col {
                mask[n][y as usize] = true;
            }
        }
        Subcomplex::from_mask_unchecked(mask)
    }

    /// Values on all stored levels; equal keys mean equal maps.
    pub fn key(&self) -> &[Vec<Idx>] {
        &self.levels
    }

    /// Replaces the source by an identical copy (same tables).
    pub fn with_source(&self, source: Arc<SSet>) -> SMap {
        SMap { source, target: self.target.clone(), levels: self.levels.clone() }
    }

    pub fn with_target(&self, target: Arc<SSet>) -> SMap {
        SMap { source: self.source.clone(), target, levels: self.levels.clone() }
    }
}

/// Prescribed values for some simplices of the source.
#[derive(Clone, Debug, Default)]
pub struct Constraints {
    fixed: HashMap<(usize, Idx), Idx>,
}

impl Constraints {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fix(mut self, n: usize, x: Idx, y: Idx) -> Self {
        self.fixed.insert((n, x), y);
        self
    }

    pub fn insert(&mut self, n: usize, x: Idx, y: Idx) {
        self.fixed.insert((n, x), y);
    }

    /// Fixes by ids, looked up in `source` and `target`.
    pub fn fix_ids(mut self, source: &SSet, target: &SSet, x: &str, y: &str) -> Result<Self> {
        let (n, a) = source.find(x)?;
        let b = target.find_at(n, y)?;
        self.fixed.insert((n, a), b);
        Ok(self)
    }

    /// Requires the map to agree with `f` on the simplices of `sub`.
    pub fn agree_on(mut self, sub: &Subcomplex, f: &SMap) -> Self {
        for n in 0..=f.top() {
            for x in 0..f.source().len(n) as Idx {
                if sub.contains(n, x) {
                    self.fixed.insert((n, x), f.apply(n, x));
                }
            }
        }
        self
    }

    pub fn is_empty(&self) -> bool {
        self.fixed.is_empty()
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct EnumOptions {
    /// Stop after this many maps.
    pub limit: Option<usize>,
    /// Only maps sending nondegenerate simplices injectively to nondegenerate
    /// simplices.
    pub injective_nondeg: bool,
    /// Never use the coskeletal strategy.
    pub finite_only: bool,
}

enum Strategy {
    /// Assign all nondegenerate simplices; the source is finite-dimensional.
    Finite(usize),
    /// Assign nondegenerate simplices up to `k`; the target is `k`-coskeletal.
    Coskeletal(usize),
}

fn choose_strategy(x: &SSet, y: &SSet, opts: &EnumOptions) -> Result<Strategy> {
    let top = x.trunc_dim().min(y.trunc_dim());
    if x.is_stable() {
        let m = x.max_nondeg_dim().unwrap_or(0);
        if m <= top {
            return Ok(Strategy::Finite(m));
        }
    }
    if !opts.finite_only {
        if let Some(k) = y.coskeletal_dim() {
            if k <= x.trunc_dim() {
                return Ok(Strategy::Coskeletal(k));
            }
        }
    }
    Err(QcError::UnsupportedEnumeration(format!(
        "source stable={} (truncation {}), target truncation {} with no known coskeletal bound",
        x.is_stable(),
        x.trunc_dim(),
        y.trunc_dim()
    )))
}

struct Item {
    n: usize,
    x: Idx,
    /// Per face: root dim, root index, surjection.
    faces: Vec<(usize, Idx, Vec<usize>)>,
}

/// Orders the nondegenerate simplices up to dimension `k`, each after all of
/// its faces.
fn plan(x: &SSet, k: usize) -> Vec<Item> {
    let base: Vec<(usize, Idx)> =
        (0..=k).flat_map(|n| x.nondegenerate(n).into_iter().map(move |a| (n, a))).collect();
    let pos: HashMap<(usize, Idx), usize> = base.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut deps: Vec<Vec<usize>> = vec![Vec::new(); base.len()];
    let mut cofaces: Vec<Vec<usize>> = vec![Vec::new(); base.len()];
    let mut faces_nf = Vec::with_capacity(base.len());
    for (i, &(n, a)) in base.iter().enumerate() {
        let mut fs = Vec::new();
        if n > 0 {
            for j in 0..=n {
                let nf = x.normal_form(n - 1, x.face(n, j, a));
                let d = pos[&(nf.root_dim, nf.root)];
                if !deps[i].contains(&d) {
                    deps[i].push(d);
                    cofaces[d].push(i);
                }
                fs.push((nf.root_dim, nf.root, nf.surjection));
            }
        }
        faces_nf.push(fs);
    }
    // Highest-dimensional ready simplex first, so that each simplex is tried
    // as soon as its faces are known and prunes the search early.
    let mut pending: Vec<usize> = deps.iter().map(|d| d.len()).collect();
    let mut ready: std::collections::BinaryHeap<(usize, std::cmp::Reverse<usize>)> =
        (0..base.len()).filter(|&i| pending[i] == 0).map(|i| (base[i].0, std::cmp::Reverse(i))).collect();
    let mut order = Vec::with_capacity(base.len());
    while let Some((_, std::cmp::Reverse(i))) = ready.pop() {
        order.push(i);
        for &c in &cofaces[i] {
            pending[c] -= 1;
            if pending[c] == 0 {
                ready.push((base[c].0, std::cmp::Reverse(c)));
            }
        }
    }
    debug_assert_eq!(order.len(), base.len());
    let mut faces_nf: Vec<Option<Vec<(usize, Idx, Vec<usize>)>>> =
        faces_nf.into_iter().map(Some).collect();
    order
        .into_iter()
        .map(|i| Item { n: base[i].0, x: base[i].1, faces: faces_nf[i].take().unwrap() })
        .collect()
}

/// Calls `visit` on each map `x -> y` satisfying the constraints, in
/// lexicographic order of the values on nondegenerate simplices (taken in a
/// fixed faces-first order). The visitor returns `false` to stop.
pub fn for_each_map(
    x: &Arc<SSet>,
    y: &Arc<SSet>,
    constraints: &Constraints,
    opts: &EnumOptions,
    mut visit: impl FnMut(SMap) -> bool,
) -> Result<()> {
    search_levels(x, y, constraints, opts, |levels| {
        visit(SMap::from_parts(x.clone(), y.clone(), levels.to_vec()))
    })
}

fn injective_levels(y: &SSet, levels: &[Vec<Idx>]) -> bool {
    levels.iter().enumerate().all(|(n, col)| {
        let mut seen = vec![false; y.len(n)];
        col.iter().all(|&v| !std::mem::replace(&mut seen[v as usize], true))
    })
}

/// The search behind [`for_each_map`], reporting levelwise value tables.
pub(crate) fn search_levels(
    x: &SSet,
    y: &SSet,
    constraints: &Constraints,
    opts: &EnumOptions,
    mut visit: impl FnMut(&[Vec<Idx>]) -> bool,
) -> Result<()> {
    let strategy = choose_strategy(x, y, opts)?;
    let k = match strategy {
        Strategy::Finite(m) | Strategy::Coskeletal(m) => m,
    };
    let top = x.trunc_dim().min(y.trunc_dim());
    let items = plan(x, k);

    // Constraints on degenerate simplices become constraints on roots.
    let mut fixed: HashMap<(usize, Idx), Idx> = HashMap::new();
    for (&(n, a), &b) in &constraints.fixed {
        if n > x.trunc_dim() || a as usize >= x.len(n) || b as usize >= y.len(n) {
            return Err(QcError::InvalidParameter("constraint out of range".into()));
        }
        let nf = x.normal_form(n, a);
        if nf.root_dim > k {
            continue;
        }
        let section: Vec<usize> =
            (0..=nf.root_dim).map(|v| nf.surjection.iter().position(|&w| w == v).unwrap()).collect();
        let want = y.apply_operator(n, b, &section);
        if let Some(prev) = fixed.insert((nf.root_dim, nf.root), want) {
            if prev != want {
                return Ok(());
            }
        }
    }

    let mut value: Vec<Vec<Idx>> = (0..=k).map(|n| vec![Idx::MAX; x.len(n)]).collect();
    let mut used: Vec<Vec<bool>> = if opts.injective_nondeg {
        (0..=k).map(|n| vec![false; y.len(n)]).collect()
    } else {
        Vec::new()
    };
    let candidates = |item: &Item, value: &Vec<Vec<Idx>>| -> Vec<Idx> {
        let fixed_val = fixed.get(&(item.n, item.x)).copied();
        let mut c: Vec<Idx> = if item.n == 0 {
            match fixed_val {
                Some(v) => vec![v],
                None => (0..y.len(0) as Idx).collect(),
            }
        } else {
            let want: Vec<Idx> = item
                .faces
                .iter()
                .map(|(p, r, s)| y.apply_surjection(*p, value[*p][*r as usize], s))
                .collect();
            let found = y.simplices_with_faces(item.n, &want);
            match fixed_val {
                Some(v) => found.iter().copied().filter(|&w| w == v).collect(),
                None => found.to_vec(),
            }
        };
        if opts.injective_nondeg {
            c.retain(|&w| !y.is_degenerate(item.n, w));
        }
        c
    };

    let mut count = 0usize;
    let mut stack: Vec<(Vec<Idx>, usize)> = Vec::with_capacity(items.len());
    if items.is_empty() {
        if let Some(f) = finish(x, y, k, top, &value, constraints)? {
            if !opts.injective_nondeg || injective_levels(y, &f) {
                visit(&f);
            }
        }
        return Ok(());
    }
    stack.push((candidates(&items[0], &value), 0));
    while !stack.is_empty() {
        let depth = stack.len() - 1;
        let item = &items[depth];
        if opts.injective_nondeg && value[item.n][item.x as usize] != Idx::MAX {
            used[item.n][value[item.n][item.x as usize] as usize] = false;
        }
        value[item.n][item.x as usize] = Idx::MAX;
        let (cands, pos) = &mut stack[depth];
        let next = loop {
            if *pos >= cands.len() {
                break None;
            }
            let c = cands[*pos];
            *pos += 1;
            if opts.injective_nondeg && used[item.n][c as usize] {
                continue;
            }
            break Some(c);
        };
        let Some(c) = next else {
            stack.pop();
            continue;
        };
        value[item.n][item.x as usize] = c;
        if opts.injective_nondeg {
            used[item.n][c as usize] = true;
        }
        if depth + 1 == items.len() {
            if let Some(f) = finish(x, y, k, top, &value, constraints)? {
                if !opts.injective_nondeg || injective_levels(y, &f) {
                    count += 1;
                    if !visit(&f) || opts.limit.is_some_and(|l| count >= l) {
                        return Ok(());
                    }
                }
            }
        } else {
            let c = candidates(&items[depth + 1], &value);
            stack.push((c, 0));
        }
    }
    Ok(())
}

/// Extends values on nondegenerate simplices of dimension `<= k` to all
/// stored levels; `None` if some simplex has no image or a constraint fails.
fn finish(
    x: &SSet,
    y: &SSet,
    k: usize,
    top: usize,
    value: &[Vec<Idx>],
    constraints: &Constraints,
) -> Result<Option<Vec<Vec<Idx>>>> {
    let mut levels: Vec<Vec<Idx>> = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let mut col = Vec::with_capacity(x.len(n));
        for a in 0..x.len(n) as Idx {
            let nf = x.normal_form(n, a);
            let v = if nf.root_dim <= k {
                let r = if nf.root_dim == n { value[n][a as usize] } else { levels[nf.root_dim][nf.root as usize] };
                if nf.root_dim == n {
                    r
                } else {
                    y.apply_surjection(nf.root_dim, r, &nf.surjection)
                }
            } else if nf.root_dim < n {
                y.apply_surjection(nf.root_dim, levels[nf.root_dim][nf.root as usize], &nf.surjection)
            } else {
                let want: Vec<Idx> = (0..=n).map(|i| levels[n - 1][x.face(n, i, a) as usize]).collect();
                match y.simplices_with_faces(n, &want) {
                    [b] => *b,
                    [] => return Ok(None),
                    _ => {
                        return Err(QcError::UnsupportedEnumeration(
                            "target is not coskeletal at the required level".into(),
                        ))
                    }
                }
            };
            col.push(v);
        }
        levels.push(col);
    }
    for (&(n, a), &b) in &constraints.fixed {
        if n <= top && levels[n][a as usize] != b {
            return Ok(None);
        }
    }
    Ok(Some(levels))
}

/// All maps `x -> y` satisfying the constraints, in canonical order.
pub fn enumerate_maps(x: &Arc<SSet>, y: &Arc<SSet>, constraints: &Constraints) -> Result<Vec<SMap>> {
    enumerate_maps_with(x, y, constraints, &EnumOptions::default())
}

pub fn enumerate_maps_with(
    x: &Arc<SSet>,
    y: &Arc<SSet>,
    constraints: &Constraints,
    opts: &EnumOptions,
) -> Result<Vec<SMap>> {
    let mut out = Vec::new();
    for_each_map(x, y, constraints, opts, |f| {
        out.push(f);
        true
    })?;
    Ok(out)
}

/// A levelwise bijective simplicial map `x -> y`, if one exists.
pub fn find_isomorphism(x: &Arc<SSet>, y: &Arc<SSet>) -> Result<Option<SMap>> {
    if x.trunc_dim() != y.trunc_dim()
        || x.level_sizes() != y.level_sizes()
        || x.nondegenerate_counts() != y.nondegenerate_counts()
    {
        return Ok(None);
    }
    let opts = EnumOptions { injective_nondeg: true, ..EnumOptions::default() };
    let mut found = None;
    for_each_map(x, y, &Constraints::new(), &opts, |f| {
        if f.is_bijective() {
            found = Some(f);
            false
        } else {
            true
        }
    })?;
    Ok(found)
}

pub fn isomorphic(x: &SSet, y: &SSet) -> Result<bool> {
    Ok(find_isomorphism(&Arc::new(x.clone()), &Arc::new(y.clone()))?.is_some())
}
