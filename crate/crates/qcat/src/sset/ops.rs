use super::maps::search_levels;
use super::{delta_trunc, seq_label, Idx, Level, SMap, SSet, Subcomplex};
use crate::error::{QcError, Result};
use std::collections::{HashMap, HashSet};
use std::sync::Arc;

fn known_cosk(x: &SSet) -> Option<usize> {
    x.caches.coskeletal.get().copied().flatten()
}

fn max_dim(x: &SSet) -> Option<usize> {
    x.max_nondeg_dim()
}

/// Levelwise product, truncated at the smaller truncation. Level `n` is stored
/// row-major: `(a, b)` sits at `a * |Y_n| + b`.
pub fn product(x: &SSet, y: &SSet) -> Result<SSet> {
    let d = x.trunc_dim().min(y.trunc_dim());
    let mut levels = Vec::with_capacity(d + 1);
    for n in 0..=d {
        let (nx, ny) = (x.len(n), y.len(n));
        let mut lv = Level::default();
        lv.ids.reserve(nx * ny);
        for a in 0..nx as Idx {
            for b in 0..ny as Idx {
                lv.ids.push(format!("({},{})", x.id(n, a), y.id(n, b)));
            }
        }
        let table = |m: usize, fx: &dyn Fn(Idx) -> Idx, fy: &dyn Fn(Idx) -> Idx| -> Vec<Idx> {
            let mut col = Vec::with_capacity(nx * ny);
            for a in 0..nx as Idx {
                let fa = fx(a) * m as Idx;
                for b in 0..ny as Idx {
                    col.push(fa + fy(b));
                }
            }
            col
        };
        if n > 0 {
            let m = y.len(n - 1);
            for i in 0..=n {
                lv.faces.push(table(m, &|a| x.face(n, i, a), &|b| y.face(n, i, b)));
            }
        }
        if n < d {
            let m = y.len(n + 1);
            for i in 0..=n {
                lv.degens.push(table(m, &|a| x.degen(n, i, a), &|b| y.degen(n, i, b)));
            }
        }
        levels.push(lv);
    }
    let stable = x.is_stable()
        && y.is_stable()
        && match (max_dim(x), max_dim(y)) {
            (Some(p), Some(q)) => p + q < d,
            _ => true,
        };
    let p = SSet::from_levels(levels, stable)?;
    if let (Some(a), Some(b)) = (known_cosk(x), known_cosk(y)) {
        p.set_coskeletal_hint(Some(a.max(b)));
    }
    Ok(p)
}

/// `f x g` between products built by [`product`].
pub fn product_map(f: &SMap, g: &SMap, source: &Arc<SSet>, target: &Arc<SSet>) -> Result<SMap> {
    let top = source.trunc_dim().min(target.trunc_dim());
    if f.top() < top || g.top() < top {
        return Err(QcError::InvalidParameter("product_map: factor maps are too short".into()));
    }
    let mut levels = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let (nx, ny) = (f.source().len(n), g.source().len(n));
        let my = g.target().len(n);
        if nx * ny != source.len(n) || f.target().len(n) * my != target.len(n) {
            return Err(QcError::InvalidParameter("product_map: shapes do not match".into()));
        }
        let mut col = Vec::with_capacity(nx * ny);
        for a in 0..nx as Idx {
            let fa = f.apply(n, a) * my as Idx;
            for b in 0..ny as Idx {
                col.push(fa + g.apply(n, b));
            }
        }
        levels.push(col);
    }
    Ok(SMap::from_parts(source.clone(), target.clone(), levels))
}

/// Block offsets of a join: level `n` holds blocks `i = -1..=n` of
/// `X_i x Y_{n-i-1}` with `X_{-1} = Y_{-1} = point`.
struct JoinLayout {
    xs: Vec<usize>,
    ys: Vec<usize>,
    offsets: Vec<Vec<usize>>,
}

impl JoinLayout {
    fn new(xs: Vec<usize>, ys: Vec<usize>, d: usize) -> JoinLayout {
        let mut offsets = Vec::with_capacity(d + 1);
        let mut l = JoinLayout { xs, ys, offsets: Vec::new() };
        for n in 0..=d {
            let mut off = Vec::with_capacity(n + 3);
            let mut acc = 0;
            for i in -1..=(n as isize) {
                off.push(acc);
                acc += l.lx(i) * l.ly(n as isize - i - 1);
            }
            off.push(acc);
            offsets.push(off);
        }
        l.offsets = offsets;
        l
    }

    fn lx(&self, i: isize) -> usize {
        if i < 0 { 1 } else { self.xs[i as usize] }
    }

    fn ly(&self, j: isize) -> usize {
        if j < 0 { 1 } else { self.ys[j as usize] }
    }

    fn size(&self, n: usize) -> usize {
        *self.offsets[n].last().unwrap()
    }

    fn index(&self, n: usize, i: isize, a: Idx, b: Idx) -> Idx {
        let j = n as isize - i - 1;
        (self.offsets[n][(i + 1) as usize] + a as usize * self.ly(j) + b as usize) as Idx
    }

    fn decode(&self, n: usize, idx: Idx) -> (isize, Idx, Idx) {
        let idx = idx as usize;
        let off = &self.offsets[n];
        let blk = off.partition_point(|&o| o <= idx) - 1;
        let i = blk as isize - 1;
        let r = idx - off[blk];
        let ly = self.ly(n as isize - i - 1);
        (i, (r / ly) as Idx, (r % ly) as Idx)
    }
}

fn align(x: &SSet, d: usize) -> Result<SSet> {
    x.with_trunc(d)
}

/// The join. Inputs with different truncations are brought to the larger one
/// when the smaller is stable, and to the smaller one otherwise.
pub fn join(x: &SSet, y: &SSet) -> Result<SSet> {
    let (dx, dy) = (x.trunc_dim(), y.trunc_dim());
    let mut d = dx.max(dy);
    if dx < d && !x.is_stable() || dy < d && !y.is_stable() {
        d = dx.min(dy);
    }
    let (x, y) = (align(x, d)?, align(y, d)?);
    let layout = JoinLayout::new(x.level_sizes(), y.level_sizes(), d);
    let mut levels = Vec::with_capacity(d + 1);
    for n in 0..=d {
        let size = layout.size(n);
        let mut lv = Level::default();
        lv.ids.reserve(size);
        for idx in 0..size as Idx {
            let (i, a, b) = layout.decode(n, idx);
            let j = n as isize - i - 1;
            let xs = if i >= 0 { x.id(i as usize, a) } else { "" };
            let ys = if j >= 0 { y.id(j as usize, b) } else { "" };
            lv.ids.push(format!("<{xs};{ys}>"));
        }
        if n > 0 {
            for f in 0..=n {
                let mut col = Vec::with_capacity(size);
                for idx in 0..size as Idx {
                    let (i, a, b) = layout.decode(n, idx);
                    let j = n as isize - i - 1;
                    let v = if (f as isize) <= i {
                        if i == 0 {
                            layout.index(n - 1, -1, 0, b)
                        } else {
                            layout.index(n - 1, i - 1, x.face(i as usize, f, a), b)
                        }
                    } else {
                        let g = f - (i + 1) as usize;
                        if j == 0 {
                            layout.index(n - 1, i, a, 0)
                        } else {
                            layout.index(n - 1, i, a, y.face(j as usize, g, b))
                        }
                    };
                    col.push(v);
                }
                lv.faces.push(col);
            }
        }
        if n < d {
            for s in 0..=n {
                let mut col = Vec::with_capacity(size);
                for idx in 0..size as Idx {
                    let (i, a, b) = layout.decode(n, idx);
                    let j = n as isize - i - 1;
                    let v = if (s as isize) <= i {
                        layout.index(n + 1, i + 1, x.degen(i as usize, s, a), b)
                    } else {
                        let g = s - (i + 1) as usize;
                        layout.index(n + 1, i, a, y.degen(j as usize, g, b))
                    };
                    col.push(v);
                }
                lv.degens.push(col);
            }
        }
        levels.push(lv);
    }
    let top = match (max_dim(&x), max_dim(&y)) {
        (Some(p), Some(q)) => Some(p + q + 1),
        (p, q) => p.or(q),
    };
    let stable = x.is_stable() && y.is_stable() && top.is_none_or(|t| t < d);
    SSet::from_levels(levels, stable)
}

/// `f * g` between joins built by [`join`] at the same truncation.
pub fn join_map(f: &SMap, g: &SMap, source: &Arc<SSet>, target: &Arc<SSet>) -> Result<SMap> {
    let d = source.trunc_dim();
    if target.trunc_dim() != d || f.top() < d || g.top() < d {
        return Err(QcError::InvalidParameter("join_map: truncations do not match".into()));
    }
    let src = JoinLayout::new(f.source().level_sizes(), g.source().level_sizes(), d);
    let tgt = JoinLayout::new(f.target().level_sizes(), g.target().level_sizes(), d);
    let mut levels = Vec::with_capacity(d + 1);
    for n in 0..=d {
        if src.size(n) != source.len(n) || tgt.size(n) != target.len(n) {
            return Err(QcError::InvalidParameter("join_map: shapes do not match".into()));
        }
        let col = (0..source.len(n) as Idx)
            .map(|idx| {
                let (i, a, b) = src.decode(n, idx);
                let j = n as isize - i - 1;
                let fa = if i >= 0 { f.apply(i as usize, a) } else { 0 };
                let gb = if j >= 0 { g.apply(j as usize, b) } else { 0 };
                tgt.index(n, i, fa, gb)
            })
            .collect();
        levels.push(col);
    }
    Ok(SMap::from_parts(source.clone(), target.clone(), levels))
}

/// `X / A`: the subcomplex collapsed to a point.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub set: Arc<SSet>,
    pub projection: SMap,
}

pub fn quotient(x: &Arc<SSet>, a: &Subcomplex) -> Result<Quotient> {
    if !a.is_closed(x) {
        return Err(QcError::NotSubcomplex("quotient by a non-subcomplex".into()));
    }
    if a.is_empty() {
        return Ok(Quotient { set: x.clone(), projection: SMap::identity(x) });
    }
    let d = x.trunc_dim();
    let mut new_index: Vec<Vec<Idx>> = Vec::with_capacity(d + 1);
    let mut ids: Vec<Vec<String>> = Vec::with_capacity(d + 1);
    let mut kept: HashSet<String> = HashSet::new();
    for n in 0..=d {
        let mut c: Idx = 0;
        let mut point: Option<Idx> = None;
        let mut idx = Vec::with_capacity(x.len(n));
        let mut names = Vec::new();
        for s in 0..x.len(n) as Idx {
            if a.contains(n, s) {
                let p = *point.get_or_insert_with(|| {
                    names.push(format!("*{}", x.id(n, s)));
                    c += 1;
                    c - 1
                });
                idx.push(p);
            } else {
                names.push(x.id(n, s).to_string());
                kept.insert(x.id(n, s).to_string());
                idx.push(c);
                c += 1;
            }
        }
        new_index.push(idx);
        ids.push(names);
    }
    let mut levels = Vec::with_capacity(d + 1);
    for n in 0..=d {
        let size = ids[n].len();
        let mut rep = vec![0 as Idx; size];
        for s in (0..x.len(n) as Idx).rev() {
            rep[new_index[n][s as usize] as usize] = s;
        }
        let mut names = std::mem::take(&mut ids[n]);
        for (q, name) in names.iter_mut().enumerate() {
            if a.contains(n, rep[q]) {
                while kept.contains(name.as_str()) {
                    name.insert(0, '*');
                }
            }
        }
        let mut lv = Level { ids: names, ..Level::default() };
        if n > 0 {
            for i in 0..=n {
                lv.faces.push(rep.iter().map(|&s| new_index[n - 1][x.face(n, i, s) as usize]).collect());
            }
        }
        if n < d {
            for i in 0..=n {
                lv.degens.push(rep.iter().map(|&s| new_index[n + 1][x.degen(n, i, s) as usize]).collect());
            }
        }
        levels.push(lv);
    }
    let set = Arc::new(SSet::from_levels(levels, x.is_stable())?);
    let projection = SMap::from_parts(x.clone(), set.clone(), new_index);
    Ok(Quotient { set, projection })
}

#[derive(Clone, Debug)]
pub struct Pushout {
    pub set: Arc<SSet>,
    pub left: SMap,
    pub right: SMap,
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// The pushout of `B <- A -> C`, computed levelwise.
pub fn pushout(f: &SMap, g: &SMap) -> Result<Pushout> {
    if f.source().level_sizes() != g.source().level_sizes() {
        return Err(QcError::InvalidParameter("pushout: maps have different sources".into()));
    }
    let (b, c) = (f.target(), g.target());
    let d = f.top().min(g.top());
    let mut class: Vec<Vec<Idx>> = Vec::with_capacity(d + 1);
    let mut reps: Vec<Vec<usize>> = Vec::with_capacity(d + 1);
    for n in 0..=d {
        let (nb, nc) = (b.len(n), c.len(n));
        let mut parent: Vec<usize> = (0..nb + nc).collect();
        for a in 0..f.source().len(n) as Idx {
            let (u, v) = (find(&mut parent, f.apply(n, a) as usize), find(&mut parent, nb + g.apply(n, a) as usize));
            if u != v {
                let (lo, hi) = (u.min(v), u.max(v));
                parent[hi] = lo;
            }
        }
        let mut cls = vec![Idx::MAX; nb + nc];
        let mut rep = Vec::new();
        for e in 0..nb + nc {
            let r = find(&mut parent, e);
            if cls[r] == Idx::MAX {
                cls[r] = rep.len() as Idx;
                rep.push(e);
            }
            cls[e] = cls[r];
        }
        class.push(cls);
        reps.push(rep);
    }
    let mut used: HashSet<String> = HashSet::new();
    let mut names: Vec<Vec<String>> = Vec::with_capacity(d + 1);
    for n in 0..=d {
        let nb = b.len(n);
        names.push(reps[n].iter().map(|&e| if e < nb { b.id(n, e as Idx).to_string() } else { String::new() }).collect());
        used.extend(names[n].iter().filter(|s| !s.is_empty()).cloned());
    }
    for n in 0..=d {
        let nb = b.len(n);
        for (q, &e) in reps[n].iter().enumerate() {
            if e >= nb {
                let mut name = c.id(n, (e - nb) as Idx).to_string();
                while used.contains(&name) {
                    name.insert_str(0, "r:");
                }
                used.insert(name.clone());
                names[n][q] = name;
            }
        }
    }
    let elem_face = |n: usize, i: usize, e: usize| -> usize {
        let nb = b.len(n);
        if e < nb {
            b.face(n, i, e as Idx) as usize
        } else {
            b.len(n - 1) + c.face(n, i, (e - nb) as Idx) as usize
        }
    };
    let elem_degen = |n: usize, i: usize, e: usize| -> usize {
        let nb = b.len(n);
        if e < nb {
            b.degen(n, i, e as Idx) as usize
        } else {
            b.len(n + 1) + c.degen(n, i, (e - nb) as Idx) as usize
        }
    };
    let mut levels = Vec::with_capacity(d + 1);
    for n in 0..=d {
        let mut lv = Level { ids: std::mem::take(&mut names[n]), ..Level::default() };
        if n > 0 {
            for i in 0..=n {
                lv.faces.push(reps[n].iter().map(|&e| class[n - 1][elem_face(n, i, e)]).collect());
            }
        }
        if n < d {
            for i in 0..=n {
                lv.degens.push(reps[n].iter().map(|&e| class[n + 1][elem_degen(n, i, e)]).collect());
            }
        }
        levels.push(lv);
    }
    let stable = b.is_stable()
        && c.is_stable()
        && max_dim(b).is_none_or(|m| m < d)
        && max_dim(c).is_none_or(|m| m < d);
    let set = Arc::new(SSet::from_levels(levels, stable)?);
    let left = (0..=d).map(|n| class[n][..b.len(n)].to_vec()).collect();
    let right = (0..=d).map(|n| class[n][b.len(n)..].to_vec()).collect();
    Ok(Pushout {
        left: SMap::from_parts(b.clone(), set.clone(), left),
        right: SMap::from_parts(c.clone(), set.clone(), right),
        set,
    })
}

#[derive(Clone, Debug)]
pub struct Pullback {
    pub set: Arc<SSet>,
    pub left: SMap,
    pub right: SMap,
}

/// The pullback of `B -> D <- C`, a levelwise subset of `B x C`.
pub fn pullback(f: &SMap, g: &SMap) -> Result<Pullback> {
    if f.target().level_sizes() != g.target().level_sizes() {
        return Err(QcError::InvalidParameter("pullback: maps have different targets".into()));
    }
    let (b, c) = (f.source(), g.source());
    let d = f.top().min(g.top());
    let mut pairs: Vec<Vec<(Idx, Idx)>> = Vec::with_capacity(d + 1);
    let mut index: Vec<HashMap<(Idx, Idx), Idx>> = Vec::with_capacity(d + 1);
    for n in 0..=d {
        let mut by_image: HashMap<Idx, Vec<Idx>> = HashMap::new();
        for y in 0..c.len(n) as Idx {
            by_image.entry(g.apply(n, y)).or_default().push(y);
        }
        let mut ps = Vec::new();
        for x in 0..b.len(n) as Idx {
            if let Some(ys) = by_image.get(&f.apply(n, x)) {
                ps.extend(ys.iter().map(|&y| (x, y)));
            }
        }
        index.push(ps.iter().enumerate().map(|(i, &p)| (p, i as Idx)).collect());
        pairs.push(ps);
    }
    let mut levels = Vec::with_capacity(d + 1);
    for n in 0..=d {
        let mut lv = Level {
            ids: pairs[n].iter().map(|&(x, y)| format!("({},{})", b.id(n, x), c.id(n, y))).collect(),
            ..Level::default()
        };
        if n > 0 {
            for i in 0..=n {
                lv.faces.push(pairs[n].iter().map(|&(x, y)| index[n - 1][&(b.face(n, i, x), c.face(n, i, y))]).collect());
            }
        }
        if n < d {
            for i in 0..=n {
                lv.degens.push(pairs[n].iter().map(|&(x, y)| index[n + 1][&(b.degen(n, i, x), c.degen(n, i, y))]).collect());
            }
        }
        levels.push(lv);
    }
    let stable = b.is_stable()
        && c.is_stable()
        && match (max_dim(b), max_dim(c)) {
            (Some(p), Some(q)) => p + q < d,
            _ => true,
        };
    let set = Arc::new(SSet::from_levels(levels, stable)?);
    let left = pairs.iter().map(|ps| ps.iter().map(|p| p.0).collect()).collect();
    let right = pairs.iter().map(|ps| ps.iter().map(|p| p.1).collect()).collect();
    Ok(Pullback {
        left: SMap::from_parts(set.clone(), b.clone(), left),
        right: SMap::from_parts(set.clone(), c.clone(), right),
        set,
    })
}

/// The `k`-skeleton: the subcomplex generated by nondegenerate simplices of
/// dimension at most `k`.
pub fn skeleton(x: &Arc<SSet>, k: usize) -> Result<SSet> {
    let gens: Vec<(usize, Idx)> = (0..=k.min(x.trunc_dim()))
        .flat_map(|n| x.nondegenerate(n).into_iter().map(move |a| (n, a)))
        .collect();
    let (s, _) = Subcomplex::generated(x, &gens).to_sset(x)?;
    Ok(Arc::try_unwrap(s).unwrap_or_else(|a| (*a).clone()))
}

fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(size);
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, size, cur, out);
            cur.pop();
        }
    }
    rec(0, n, size, &mut cur, &mut out);
    out
}

fn sk_simplex(n: usize, k: usize) -> Result<SSet> {
    let d = Arc::new(delta_trunc(n, k + 1)?);
    skeleton(&d, k)
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum CoskKey {
    Base(usize, Idx),
    /// Values on the `k`-subsets of `[n]`, lexicographically.
    Top(usize, Vec<Idx>),
}

impl CoskKey {
    fn level(&self) -> usize {
        match self {
            CoskKey::Base(n, _) | CoskKey::Top(n, _) => *n,
        }
    }
}

/// `cosk_k X`: level `n > k` is the set of maps from the `k`-skeleton of the
/// `n`-simplex to `X`.
pub fn coskeleton(x: &Arc<SSet>, k: usize) -> Result<SSet> {
    let d = x.trunc_dim();
    if k >= d {
        return Ok((**x).clone());
    }
    let subs: Vec<Vec<Vec<usize>>> = (0..=d).map(|n| subsets(n + 1, k + 1)).collect();
    let rank: Vec<HashMap<Vec<usize>, usize>> = subs
        .iter()
        .map(|ss| ss.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
        .collect();
    let opts = super::EnumOptions { finite_only: true, ..Default::default() };
    let mut keys: Vec<Vec<CoskKey>> = Vec::with_capacity(d + 1);
    for n in 0..=d {
        if n <= k {
            keys.push((0..x.len(n) as Idx).map(|a| CoskKey::Base(n, a)).collect());
            continue;
        }
        let sk = sk_simplex(n, k)?;
        let positions: Vec<Idx> = subs[n]
            .iter()
            .map(|s| sk.find_at(k, &seq_label(s, n >= 10)))
            .collect::<Result<_>>()?;
        let mut lv = Vec::new();
        search_levels(&sk, x, &Default::default(), &opts, |levels| {
            lv.push(CoskKey::Top(n, positions.iter().map(|&p| levels[k][p as usize]).collect()));
            true
        })?;
        keys.push(lv);
    }
    // the restriction along a monotone theta: [k] -> [n]
    let restrict = |key: &CoskKey, theta: &[usize]| -> Idx {
        match key {
            CoskKey::Base(n, a) => x.apply_operator(*n, *a, theta),
            CoskKey::Top(n, vals) => {
                let mut u: Vec<usize> = theta.to_vec();
                u.dedup();
                let mut v = 0;
                while u.len() < k + 1 {
                    if !u.contains(&v) {
                        u.push(v);
                    }
                    v += 1;
                }
                u.sort_unstable();
                let local: Vec<usize> = theta.iter().map(|t| u.binary_search(t).unwrap()).collect();
                x.apply_operator(k, vals[rank[*n][&u]], &local)
            }
        }
    };
    let face = |key: &CoskKey, i: usize| -> CoskKey {
        match key {
            CoskKey::Base(n, a) => CoskKey::Base(n - 1, x.face(*n, i, *a)),
            CoskKey::Top(n, vals) => {
                let n = *n;
                if n - 1 == k {
                    let s: Vec<usize> = (0..=n).filter(|&v| v != i).collect();
                    CoskKey::Base(k, vals[rank[n][&s]])
                } else {
                    CoskKey::Top(
                        n - 1,
                        subs[n - 1]
                            .iter()
                            .map(|s| {
                                let t: Vec<usize> = s.iter().map(|&v| if v >= i { v + 1 } else { v }).collect();
                                vals[rank[n][&t]]
                            })
                            .collect(),
                    )
                }
            }
        }
    };
    let degen = |key: &CoskKey, i: usize| -> CoskKey {
        let n = key.level();
        if let CoskKey::Base(_, a) = key {
            if n < k {
                return CoskKey::Base(n + 1, x.degen(n, i, *a));
            }
        }
        CoskKey::Top(
            n + 1,
            subs[n + 1]
                .iter()
                .map(|s| {
                    let theta: Vec<usize> = s.iter().map(|&v| if v <= i { v } else { v - 1 }).collect();
                    restrict(key, &theta)
                })
                .collect(),
        )
    };
    let name = |key: &CoskKey| -> String {
        match key {
            CoskKey::Base(n, a) => x.id(*n, *a).to_string(),
            CoskKey::Top(_, vals) => {
                let parts: Vec<&str> = vals.iter().map(|&v| x.id(k, v)).collect();
                format!("<{}>", parts.join("|"))
            }
        }
    };
    let out = SSet::from_keys(keys, face, degen, name, false)?;
    out.set_coskeletal_hint(Some(k));
    Ok(out)
}

/// Whether the unit `X -> cosk_k X` is a bijection on every stored level.
pub fn is_coskeletal(x: &SSet, k: usize) -> Result<bool> {
    let d = x.trunc_dim();
    for n in k + 1..=d {
        let mut seen = HashSet::with_capacity(x.len(n));
        for a in 0..x.len(n) as Idx {
            if !seen.insert(x.faces_of(n, a)) {
                return Ok(false);
            }
        }
        let sk = sk_simplex(n, k)?;
        let cap = x.len(n);
        let mut count = 0usize;
        search_levels(&sk, x, &Default::default(), &super::EnumOptions { finite_only: true, ..Default::default() }, |_| {
            count += 1;
            count <= cap
        })?;
        if count != cap {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::{boundary_trunc, delta, e_space, horn, isomorphic, monotone_maps, point, simplex_map};

    #[test]
    fn square_has_two_triangles() {
        let sq = product(&delta(1), &delta(1)).unwrap();
        sq.audit().unwrap();
        // nondegenerate n-simplices are jointly injective pairs of monotone maps
        for n in 0..=3 {
            let pairs = monotone_maps(n, 1);
            let brute = pairs
                .iter()
                .flat_map(|s| pairs.iter().map(move |t| (s, t)))
                .filter(|(s, t)| (1..=n).all(|i| (s[i - 1], t[i - 1]) != (s[i], t[i])))
                .count();
            assert_eq!(sq.nondegenerate(n).len(), brute);
        }
        assert_eq!(&sq.nondegenerate_counts()[..3], &[4, 5, 2]);
    }

    #[test]
    fn join_of_simplices_is_a_simplex() {
        for (p, q) in [(0, 0), (0, 1), (1, 1), (0, 2)] {
            let j = join(&delta(p), &delta(q)).unwrap();
            j.audit().unwrap();
            assert!(j.is_stable());
            assert!(isomorphic(&j, &delta(p + q + 1)).unwrap(), "{p} {q}");
        }
    }

    #[test]
    fn join_with_empty_is_neutral() {
        let e = crate::sset::empty(8);
        let j = join(&delta(2), &e).unwrap();
        assert!(isomorphic(&j, &delta(2)).unwrap());
    }

    #[test]
    fn quotient_by_empty_is_identity() {
        let x = Arc::new(boundary_trunc(2, 3).unwrap());
        let q = quotient(&x, &Subcomplex::empty(&x)).unwrap();
        assert_eq!(*q.set, *x);
        assert!(q.projection.is_bijective());
    }

    #[test]
    fn circle_from_interval() {
        let x = Arc::new(delta(1));
        let ends = Subcomplex::from_ids(&x, &["0", "1"]).unwrap();
        let q = quotient(&x, &ends).unwrap();
        q.set.audit().unwrap();
        q.projection.validate().unwrap();
        assert_eq!(&q.set.nondegenerate_counts()[..3], &[1, 1, 0]);
    }

    #[test]
    fn gluing_two_edges_gives_the_inner_horn() {
        let pt = Arc::new(point().with_trunc(8).unwrap());
        let e = Arc::new(delta(1));
        let end = simplex_map(&pt, &e, &[1]).unwrap();
        let start = simplex_map(&pt, &e, &[0]).unwrap();
        let p = pushout(&end, &start).unwrap();
        p.set.audit().unwrap();
        p.left.validate().unwrap();
        p.right.validate().unwrap();
        assert!(isomorphic(&p.set, &horn(2, 1).unwrap()).unwrap());
    }

    #[test]
    fn pullback_over_a_point_is_the_product() {
        let pt = Arc::new(point().with_trunc(8).unwrap());
        let a = Arc::new(delta(1));
        let b = Arc::new(delta(2));
        let fa = enumerate_maps_to_point(&a, &pt);
        let fb = enumerate_maps_to_point(&b, &pt);
        let pb = pullback(&fa, &fb).unwrap();
        assert!(isomorphic(&pb.set, &product(&a, &b).unwrap()).unwrap());
    }

    fn enumerate_maps_to_point(x: &Arc<SSet>, pt: &Arc<SSet>) -> SMap {
        let levels = (0..=x.trunc_dim()).map(|n| vec![0; x.len(n)]).collect();
        SMap::new(x.clone(), pt.clone(), levels).unwrap()
    }

    #[test]
    fn skeleton_counts() {
        let d = Arc::new(delta(3));
        let s = skeleton(&d, 1).unwrap();
        assert_eq!(&s.nondegenerate_counts()[..3], &[4, 6, 0]);
    }

    #[test]
    fn coskeleton_fills_the_loop() {
        let b = Arc::new(boundary_trunc(2, 3).unwrap());
        let c = coskeleton(&b, 1).unwrap();
        c.audit().unwrap();
        assert!(isomorphic(&c, &delta(2).truncate(3).unwrap()).unwrap());
    }

    #[test]
    fn coskeletal_dimensions() {
        assert!(is_coskeletal(&delta(2).truncate(4).unwrap(), 1).unwrap());
        assert!(!is_coskeletal(&delta(2).truncate(4).unwrap(), 0).unwrap());
        let b = boundary_trunc(2, 4).unwrap();
        assert!(!is_coskeletal(&b, 1).unwrap());
        assert!(is_coskeletal(&b, 2).unwrap());
        assert_eq!(b.coskeletal_dim(), Some(2));
        let e = e_space(&["a", "b"], 4).unwrap();
        assert!(is_coskeletal(&e, 0).unwrap());
    }
}
