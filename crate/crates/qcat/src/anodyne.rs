//! Replayable certificates for inner and special anodyne extensions.
//!
//! A certificate names an ambient simplicial set, a starting subcomplex and a
//! list of horn attachments. [`verify`] replays the list: each step must glue
//! a nondegenerate simplex along a horn that already lies in the current
//! subcomplex, with the missing face still absent.

use crate::error::{QcError, Result};
use crate::horn::{quasi_iso, Ambient, QuasiIsoMode};
use crate::sset::{
    delta_trunc, e_space, find_isomorphism, horn_trunc, join, join_map, load, prism_label,
    product, pushout, seq_label, squashed, from_json as sset_from_json, to_json as sset_to_json, Idx, SMap, SSet,
    Subcomplex,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HornClass {
    Inner,
    SpecialLeft,
    SpecialRight,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub simplex: String,
    pub k: usize,
    pub class: HornClass,
}

#[derive(Clone, Debug)]
pub struct AnodyneCertificate {
    pub ambient: Arc<SSet>,
    /// Generators of the starting subcomplex.
    pub start: Vec<String>,
    pub steps: Vec<Step>,
    /// Generators of the final subcomplex; `None` means the whole ambient (up
    /// to `verified_dim` when partial).
    pub end: Option<Vec<String>>,
    pub partial: bool,
    pub verified_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reason {
    Malformed(String),
    UnknownSimplex(String),
    BadIndex,
    Degenerate,
    AlreadyPresent,
    HornIncomplete(usize),
    Bounding,
    NotInner,
    NotSpecial,
    EndMismatch(String),
}

impl Reason {
    pub fn tag(&self) -> &'static str {
        match self {
            Reason::Malformed(_) => "malformed",
            Reason::UnknownSimplex(_) => "unknown-simplex",
            Reason::BadIndex => "bad-index",
            Reason::Degenerate => "degenerate",
            Reason::AlreadyPresent => "already-present",
            Reason::HornIncomplete(_) => "horn-incomplete",
            Reason::Bounding => "bounding",
            Reason::NotInner => "not-inner",
            Reason::NotSpecial => "not-special",
            Reason::EndMismatch(_) => "end-mismatch",
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reason::Malformed(s) | Reason::UnknownSimplex(s) | Reason::EndMismatch(s) => {
                write!(f, "{}: {s}", self.tag())
            }
            Reason::HornIncomplete(i) => write!(f, "{}: face d{i} is missing", self.tag()),
            _ => f.write_str(self.tag()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid { steps: usize, verified_dim: usize },
    Invalid { step: Option<usize>, reason: Reason },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid { .. })
    }

    pub fn to_json(&self) -> Value {
        match self {
            Verdict::Valid { steps, verified_dim } => {
                json!({"valid": true, "steps": steps, "verified_dim": verified_dim})
            }
            Verdict::Invalid { step, reason } => {
                json!({"valid": false, "step": step, "reason": reason.tag(), "detail": reason.to_string()})
            }
        }
    }
}

fn invalid(step: Option<usize>, reason: Reason) -> Verdict {
    Verdict::Invalid { step, reason }
}

fn lookup(x: &SSet, id: &str) -> std::result::Result<(usize, Idx), Reason> {
    x.find(id).map_err(|e| match e {
        QcError::UnknownId(s) => Reason::UnknownSimplex(s),
        e => Reason::Malformed(e.to_string()),
    })
}

fn generated(x: &SSet, ids: &[String]) -> std::result::Result<Subcomplex, Reason> {
    let gens = ids.iter().map(|id| lookup(x, id)).collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(Subcomplex::generated(x, &gens))
}

/// Replays a certificate. Quasi-isomorphism side conditions of special steps
/// are decided by inverse providers in the ambient.
pub fn verify(cert: &AnodyneCertificate) -> Verdict {
    let x = &cert.ambient;
    let mut cur = match generated(x, &cert.start) {
        Ok(s) => s,
        Err(r) => return invalid(None, r),
    };
    let mut qi: HashMap<Idx, bool> = HashMap::new();
    let mut is_qi = |e: Idx| -> bool {
        *qi.entry(e).or_insert_with(|| {
            x.trunc_dim() >= 2
                && quasi_iso(Ambient::Plain(x), e, QuasiIsoMode::Providers).is_ok_and(|v| v.is_yes())
        })
    };
    for (j, st) in cert.steps.iter().enumerate() {
        let bad = |r| invalid(Some(j), r);
        let (n, y) = match lookup(x, &st.simplex) {
            Ok(p) => p,
            Err(r) => return bad(r),
        };
        let k = st.k;
        if n == 0 || k > n {
            return bad(Reason::BadIndex);
        }
        if x.is_degenerate(n, y) {
            return bad(Reason::Degenerate);
        }
        if cur.contains(n, y) {
            return bad(Reason::AlreadyPresent);
        }
        if let Some(i) = (0..=n).find(|&i| i != k && !cur.contains(n - 1, x.face(n, i, y))) {
            return bad(Reason::HornIncomplete(i));
        }
        let missing = x.face(n, k, y);
        if cur.contains(n - 1, missing) {
            return bad(Reason::Bounding);
        }
        let ok = match st.class {
            HornClass::Inner => 0 < k && k < n,
            HornClass::SpecialLeft => k == 0 && n >= 2 && is_qi(x.edge(n, y, 0, 1)),
            HornClass::SpecialRight => k == n && n >= 2 && is_qi(x.edge(n, y, n - 1, n)),
        };
        if !ok {
            return bad(if st.class == HornClass::Inner { Reason::NotInner } else { Reason::NotSpecial });
        }
        cur.insert(x, n, y);
    }
    if cert.verified_dim > x.trunc_dim() {
        return invalid(None, Reason::Malformed("verified_dim exceeds the ambient truncation".into()));
    }
    let target = match &cert.end {
        Some(ids) => match generated(x, ids) {
            Ok(s) => s,
            Err(r) => return invalid(None, r),
        },
        None => Subcomplex::full(x),
    };
    let top = if cert.partial { cert.verified_dim } else { x.trunc_dim() };
    for n in 0..=top {
        for a in 0..x.len(n) as Idx {
            if cur.contains(n, a) != target.contains(n, a) {
                let what = if cur.contains(n, a) { "unexpected" } else { "missing" };
                return invalid(None, Reason::EndMismatch(format!("{what} simplex {}", x.id(n, a))));
            }
        }
    }
    Verdict::Valid { steps: cert.steps.len(), verified_dim: top }
}

impl AnodyneCertificate {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "ambient": sset_to_json(&self.ambient),
            "start": self.start,
            "steps": self.steps,
            "partial": self.partial,
            "verified_dim": self.verified_dim,
        });
        if let Some(end) = &self.end {
            v["end"] = json!(end);
        }
        v
    }

    /// Parses a certificate; a string `"ambient"` is a path, relative to
    /// `base` when given.
    pub fn from_json(v: &Value, base: Option<&Path>) -> Result<AnodyneCertificate> {
        let bad = |m: &str| QcError::Malformed(format!("certificate: {m}"));
        let ambient = match v.get("ambient") {
            Some(Value::String(p)) => {
                let path = base.map_or_else(|| Path::new(p).to_path_buf(), |b| b.join(p));
                load(&path)?
            }
            Some(obj @ Value::Object(_)) => sset_from_json(obj)?,
            _ => return Err(bad("missing ambient")),
        };
        let strings = |key: &str| -> Result<Option<Vec<String>>> {
            match v.get(key) {
                None | Some(Value::Null) => Ok(None),
                Some(x) => serde_json::from_value(x.clone()).map(Some).map_err(|e| bad(&format!("{key}: {e}"))),
            }
        };
        let start = strings("start")?.ok_or_else(|| bad("missing start"))?;
        let end = strings("end")?;
        let steps: Vec<Step> = serde_json::from_value(v.get("steps").cloned().ok_or_else(|| bad("missing steps"))?)
            .map_err(|e| bad(&format!("steps: {e}")))?;
        let partial = v.get("partial").and_then(Value::as_bool).unwrap_or(false);
        let verified_dim = match v.get("verified_dim") {
            Some(d) => d.as_u64().ok_or_else(|| bad("verified_dim is not an integer"))? as usize,
            None => ambient.trunc_dim(),
        };
        Ok(AnodyneCertificate { ambient: Arc::new(ambient), start, steps, end, partial, verified_dim })
    }

    /// Every simplex the steps add: targets and their missing faces.
    pub fn added(&self) -> Result<Vec<(usize, Idx)>> {
        let x = &self.ambient;
        let mut out = Vec::with_capacity(2 * self.steps.len());
        for st in &self.steps {
            let (n, y) = x.find(&st.simplex)?;
            out.push((n, y));
            if n > 0 && st.k <= n {
                out.push((n - 1, x.face(n, st.k, y)));
            }
        }
        Ok(out)
    }
}

/// Single-step corruptions of a certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// Exchange steps `a < b`, where `b` glues along something `a` added.
    Swap(usize, usize),
    /// Replace the horn index of a step.
    ChangeK(usize, usize),
    Drop(usize),
}

pub fn mutate(cert: &AnodyneCertificate, m: Mutation) -> AnodyneCertificate {
    let mut c = cert.clone();
    match m {
        Mutation::Swap(a, b) => c.steps.swap(a, b),
        Mutation::ChangeK(j, k) => c.steps[j].k = k,
        Mutation::Drop(j) => {
            c.steps.remove(j);
        }
    }
    c
}

/// Pairs `(a, b)` such that the horn of step `b` contains a simplex first
/// added at step `a`; swapping them breaks horn containment.
pub fn dependent_swaps(cert: &AnodyneCertificate) -> Result<Vec<(usize, usize)>> {
    let x = &cert.ambient;
    let mut origin: HashMap<(usize, Idx), usize> = HashMap::new();
    let mut out = Vec::new();
    for (j, st) in cert.steps.iter().enumerate() {
        let (n, y) = x.find(&st.simplex)?;
        let a = (0..=n)
            .filter(|&i| i != st.k)
            .filter_map(|i| origin.get(&(n - 1, x.face(n, i, y))))
            .copied()
            .max();
        if let Some(a) = a {
            out.push((a, j));
        }
        origin.insert((n, y), j);
        let f = x.face(n, st.k, y);
        origin.insert((n - 1, f), j);
    }
    Ok(out)
}

/// Other horn indices for each step, the candidates for [`Mutation::ChangeK`].
pub fn index_changes(cert: &AnodyneCertificate) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for (j, st) in cert.steps.iter().enumerate() {
        let (n, _) = cert.ambient.find(&st.simplex)?;
        out.extend((0..=n).filter(|&k| k != st.k).map(|k| (j, k)));
    }
    Ok(out)
}

fn check_params(ok: bool, msg: String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(QcError::InvalidParameter(msg))
    }
}

/// Subsets of `items` of size `size`, in lexicographic order.
fn combinations(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    fn rec(items: &[usize], size: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in from..items.len() {
            cur.push(items[i]);
            rec(items, size, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, size, 0, &mut Vec::with_capacity(size), &mut out);
    out
}

/// Records steps and keeps the running subcomplex, so that generators can ask
/// what is already present.
struct Replay {
    x: Arc<SSet>,
    cur: Subcomplex,
    steps: Vec<Step>,
}

impl Replay {
    fn new(x: Arc<SSet>, start: &[String]) -> Result<Replay> {
        let gens = start.iter().map(|id| x.find(id)).collect::<Result<Vec<_>>>()?;
        let cur = Subcomplex::generated(&x, &gens);
        Ok(Replay { x, cur, steps: Vec::new() })
    }

    fn attach(&mut self, id: &str, k: usize, class: HornClass) -> Result<()> {
        let (n, y) = self.x.find(id)?;
        self.cur.insert(&self.x, n, y);
        self.steps.push(Step { simplex: id.to_string(), k, class });
        Ok(())
    }

    fn attach_idx(&mut self, n: usize, y: Idx, k: usize, class: HornClass) {
        self.cur.insert(&self.x, n, y);
        self.steps.push(Step { simplex: self.x.id(n, y).to_string(), k, class });
    }

    fn finish(self, start: Vec<String>, end: Option<Vec<String>>) -> AnodyneCertificate {
        let d = self.x.trunc_dim();
        AnodyneCertificate { ambient: self.x, start, steps: self.steps, end, partial: false, verified_dim: d }
    }
}

fn simplex_id(m: usize, seq: &[usize]) -> String {
    seq_label(seq, m >= 10)
}

/// The inclusion `Delta^n v Delta^1 -> Delta^{n+1}` (the wedge on `{0..n}` and
/// `{n, n+1}`). Stage `i` glues every `[J, n, n+1]` with `|J| = i + 1` along
/// its horn at `n`.
pub fn gen_spine_simplex(n: usize) -> Result<AnodyneCertificate> {
    check_params(n >= 1, "gen_spine_simplex needs n >= 1".into())?;
    let m = n + 1;
    let x = Arc::new(delta_trunc(m, m + 1)?);
    let start = vec![simplex_id(m, &(0..=n).collect::<Vec<_>>()), simplex_id(m, &[n, n + 1])];
    let mut r = Replay::new(x, &start)?;
    let base: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in combinations(&base, i + 1) {
            let mut s = j.clone();
            s.extend([n, n + 1]);
            r.attach(&simplex_id(m, &s), j.len(), HornClass::Inner)?;
        }
    }
    Ok(r.finish(start, None))
}

/// The spine inclusion `Spi[Delta^m] -> Delta^m`, built by gluing on one
/// vertex at a time: `Delta^j v Delta^1 -> Delta^{j+1}` for `j = 1..m-1`.
pub fn gen_spine(m: usize) -> Result<AnodyneCertificate> {
    check_params(m >= 1, "gen_spine needs m >= 1".into())?;
    let x = Arc::new(delta_trunc(m, m + 1)?);
    let start: Vec<String> = (0..m).map(|i| simplex_id(m, &[i, i + 1])).collect();
    let mut r = Replay::new(x, &start)?;
    for n in 1..m {
        let base: Vec<usize> = (0..n).collect();
        for i in 0..n {
            for j in combinations(&base, i + 1) {
                let mut s = j.clone();
                s.extend([n, n + 1]);
                r.attach(&simplex_id(m, &s), j.len(), HornClass::Inner)?;
            }
        }
    }
    Ok(r.finish(start, None))
}

/// A certificate exhibiting `Delta^n_k` (see [`squashed`]) as an inner
/// anodyne extension. For `k = 0` it starts from the edge `[01]`; for
/// `k = n - 1` from `[n-1, n]`; otherwise from the image of `[1..n]`, a copy of
/// `Delta^{n-1}_{k-1}`.
pub fn gen_squash(n: usize, k: usize) -> Result<AnodyneCertificate> {
    check_params(k < n, format!("gen_squash({n},{k}) needs 0 <= k < n"))?;
    let x = Arc::new(squashed(n, k, n + 1)?);
    if k == n - 1 && k > 0 {
        let start = vec![simplex_id(n, &[n - 1, n])];
        let mut r = Replay::new(x, &start)?;
        let base: Vec<usize> = (0..n - 1).collect();
        for size in 1..n {
            for j in combinations(&base, size) {
                let mut s = j.clone();
                s.extend([n - 1, n]);
                r.attach(&simplex_id(n, &s), size, HornClass::Inner)?;
            }
        }
        return Ok(r.finish(start, None));
    }
    let start = if k == 0 {
        vec![simplex_id(n, &[0, 1])]
    } else {
        vec![simplex_id(n, &(1..=n).collect::<Vec<_>>())]
    };
    let mut r = Replay::new(x, &start)?;
    let rest: Vec<usize> = (2..=n).collect();
    for size in 1..n {
        for j in combinations(&rest, size) {
            // [0 1 J] is nondegenerate only if J reaches the second block
            if *j.last().unwrap() <= k {
                continue;
            }
            let mut s = vec![0, 1];
            s.extend(&j);
            r.attach(&simplex_id(n, &s), 1, HornClass::Inner)?;
        }
    }
    Ok(r.finish(start, None))
}

/// Vertices of the prism quotient: `(v, false)` is `v`, `(v, true)` is `v'`.
fn prism_id(n: usize, verts: &[(usize, bool)]) -> String {
    let s: Vec<usize> = verts.iter().map(|p| p.0).collect();
    let t: Vec<usize> = verts.iter().map(|p| usize::from(p.1)).collect();
    prism_label(&s, &t, n >= 10)
}

/// Top simplex `D_i = [0..i, i'..n']` of the prism.
fn prism_top(n: usize, i: usize) -> Vec<(usize, bool)> {
    (0..=i).map(|v| (v, false)).chain((i..=n).map(|v| (v, true))).collect()
}

/// The filtration `X_0 = E_0 ⊂ X_1 ⊂ ... ⊂ X_n` of the prism quotient
/// `C_cyl^n` by the images `E_i` of its top simplices, one certificate per
/// stage. Stage 0 builds `E_0` from the edge `[0 0']`; stage `i + 1` glues
/// `E_{i+1}` onto `X_i` along the face opposite `i + 1`, pairing each new
/// simplex without `i` with its cone on `i`.
pub fn gen_cyl_squash(n: usize) -> Result<Vec<AnodyneCertificate>> {
    let x = Arc::new(crate::sset::prism_quotient(n, n + 2)?);
    let mut out = Vec::with_capacity(n + 1);
    let start = vec![prism_id(n, &[(0, false), (0, true)])];
    let mut r = Replay::new(x.clone(), &start)?;
    let primes: Vec<usize> = (1..=n).collect();
    for size in 1..=n {
        for j in combinations(&primes, size) {
            let mut s = vec![(0, false), (0, true)];
            s.extend(j.iter().map(|&v| (v, true)));
            r.attach(&prism_id(n, &s), 1, HornClass::Inner)?;
        }
    }
    out.push(r.finish(start, Some(vec![prism_id(n, &prism_top(n, 0))])));
    for i in 0..n {
        let start: Vec<String> = (0..=i).map(|m| prism_id(n, &prism_top(n, m))).collect();
        let end: Vec<String> = (0..=i + 1).map(|m| prism_id(n, &prism_top(n, m))).collect();
        let mut r = Replay::new(x.clone(), &start)?;
        // D_{i+1} minus the pivot i and the omitted vertex i + 1
        let lower: Vec<(usize, bool)> = (0..i).map(|v| (v, false)).collect();
        let upper: Vec<(usize, bool)> = (i + 1..=n).map(|v| (v, true)).collect();
        let others: Vec<(usize, bool)> = lower.iter().chain(&upper).copied().collect();
        let idx: Vec<usize> = (0..others.len()).collect();
        for size in 0..=others.len() {
            for pick in combinations(&idx, size) {
                let chosen: Vec<(usize, bool)> = pick.iter().map(|&p| others[p]).collect();
                if !chosen.iter().any(|p| p.1) {
                    continue;
                }
                let below = chosen.iter().filter(|p| !p.1).count();
                let mut s: Vec<(usize, bool)> = chosen[..below].to_vec();
                s.extend([(i, false), (i + 1, false)]);
                s.extend(&chosen[below..]);
                let class = if below > 0 { HornClass::Inner } else { HornClass::SpecialLeft };
                r.attach(&prism_id(n, &s), below, class)?;
            }
        }
        out.push(r.finish(start, Some(end)));
    }
    Ok(out)
}

/// `(Lambda^n_k -> Delta^n) box (boundary Delta^r -> Delta^r)` as an inner
/// anodyne extension inside `Delta^n x Delta^r`. Stage `i` glues, dimension by
/// dimension, every simplex through the vertex `(k, i)` along the face
/// omitting it.
pub fn gen_box_inner(n: usize, k: usize, r: usize) -> Result<AnodyneCertificate> {
    check_params(0 < k && k < n, format!("gen_box_inner({n},{k},{r}) needs 0 < k < n"))?;
    let d = n + r + 1;
    let x = Arc::new(product(&delta_trunc(n, d)?, &delta_trunc(r, d)?)?);
    let cols = |m: usize, y: Idx| -> Vec<(usize, usize)> {
        x.vertices(m, y).iter().map(|&v| (v as usize / (r + 1), v as usize % (r + 1))).collect()
    };
    let in_start = |m: usize, y: Idx| -> bool {
        let cs = cols(m, y);
        let mut a = vec![false; n + 1];
        let mut u = vec![false; r + 1];
        for &(p, q) in &cs {
            a[p] = true;
            u[q] = true;
        }
        a[k] = true;
        a.contains(&false) || u.contains(&false)
    };
    let start_set = Subcomplex::from_predicate(&x, in_start)?;
    let start: Vec<String> = start_set.nondegenerate(&x).iter().map(|&(m, y)| x.id(m, y).to_string()).collect();
    let mut rp = Replay { x: x.clone(), cur: start_set, steps: Vec::new() };
    for i in 0..=r {
        for t in n..=n + r {
            for y in x.nondegenerate(t) {
                if rp.cur.contains(t, y) {
                    continue;
                }
                if let Some(p) = cols(t, y).iter().position(|&c| c == (k, i)) {
                    rp.attach_idx(t, y, p, HornClass::Inner);
                }
            }
        }
    }
    Ok(rp.finish(start, None))
}

/// `({0} -> E^1) box (boundary Delta^r -> Delta^r)` inside `E^1 x Delta^r`,
/// replayed through dimension `d` and flagged partial. Stage `m` adds the
/// simplices whose groups above `m` are all `a` and whose `m`-group contains
/// a `b`: stage 0 glues along the first `a_0` (special left horns), later
/// stages along the final `a_m` (inner, and special right for `m = r`).
pub fn gen_box_special(r: usize, d: usize) -> Result<AnodyneCertificate> {
    check_params(r >= 1, "gen_box_special needs r >= 1: for r = 0 the first horn is a 1-dimensional outer horn".into())?;
    check_params(d > r, format!("gen_box_special({r},{d}) needs d > r"))?;
    let x = Arc::new(product(&e_space(&["a", "b"], d)?, &delta_trunc(r, d)?)?);
    // (is_b, group) per vertex
    let cols = |m: usize, y: Idx| -> Vec<(bool, usize)> {
        x.vertices(m, y).iter().map(|&v| (v as usize / (r + 1) == 1, v as usize % (r + 1))).collect()
    };
    let in_start = |m: usize, y: Idx| -> bool {
        let cs = cols(m, y);
        (0..=r).any(|g| !cs.iter().any(|c| c.1 == g)) || cs.iter().all(|c| !c.0)
    };
    let start_set = Subcomplex::from_predicate(&x, in_start)?;
    let start: Vec<String> = start_set.nondegenerate(&x).iter().map(|&(m, y)| x.id(m, y).to_string()).collect();
    let mut rp = Replay { x: x.clone(), cur: start_set, steps: Vec::new() };
    for m in 0..=r {
        for t in 1..=d {
            for y in x.nondegenerate(t) {
                if rp.cur.contains(t, y) {
                    continue;
                }
                let cs = cols(t, y);
                if (0..=r).any(|g| !cs.iter().any(|c| c.1 == g)) || cs.iter().any(|c| c.1 > m && c.0) {
                    continue;
                }
                let group: Vec<usize> = (0..cs.len()).filter(|&p| cs[p].1 == m).collect();
                if !group.iter().any(|&p| cs[p].0) {
                    continue;
                }
                let (p, class) = if m == 0 {
                    (group[0], HornClass::SpecialLeft)
                } else if m < r {
                    (*group.last().unwrap(), HornClass::Inner)
                } else {
                    (*group.last().unwrap(), HornClass::SpecialRight)
                };
                if cs[p].0 {
                    continue;
                }
                rp.attach_idx(t, y, p, class);
            }
        }
    }
    let mut c = rp.finish(start, None);
    c.partial = true;
    c.verified_dim = d - 1;
    Ok(c)
}

/// Outcome of a structural check, with a human-readable account.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub holds: bool,
    pub detail: String,
}

fn sub_of(x: &Arc<SSet>, keep: impl Fn(usize, Idx) -> bool) -> Result<(Arc<SSet>, SMap)> {
    Subcomplex::from_predicate(x, keep)?.to_sset(x)
}

fn vertex_set(x: &SSet, m: usize, y: Idx, size: usize) -> Vec<bool> {
    let mut s = vec![false; size];
    for v in x.vertices(m, y) {
        s[v as usize] = true;
    }
    s
}

/// Builds `(Lambda^n_k * Delta^r) ∪ (Delta^n * boundary Delta^r)` inside
/// `Delta^n * Delta^r = Delta^{n+r+1}` and compares it with the horn
/// `Lambda^{n+r+1}_k`: as a subcomplex under the vertex identification, and
/// as an abstract simplicial set.
pub fn check_joinbox(n: usize, k: usize, r: usize) -> Result<Check> {
    check_params(0 < k && k <= n, format!("check_joinbox({n},{k},{r}) needs 0 < k <= n"))?;
    let m = n + r + 1;
    let d = m + 1;
    let dn = Arc::new(delta_trunc(n, d)?);
    let dr = Arc::new(delta_trunc(r, d)?);
    let (hk, hk_in) = sub_of(&dn, |q, y| {
        let mut s = vertex_set(&dn, q, y, n + 1);
        s[k] = true;
        s.contains(&false)
    })?;
    let (br, br_in) = sub_of(&dr, |q, y| vertex_set(&dr, q, y, r + 1).contains(&false))?;
    let whole = Arc::new(join(&dn, &dr)?);
    let left = Arc::new(join(&hk, &dr)?);
    let right = Arc::new(join(&dn, &br)?);
    let f = join_map(&hk_in, &SMap::identity(&dr), &left, &whole)?;
    let g = join_map(&SMap::identity(&dn), &br_in, &right, &whole)?;
    let dom = f.image().union(&g.image());
    // vertex of the join -> vertex of Delta^{n+r+1}
    let place: Vec<usize> = (0..whole.len(0) as Idx)
        .map(|v| {
            let id = whole.id(0, v);
            let (a, b) = id.trim_matches(['<', '>']).split_once(';').expect("join vertex id");
            if b.is_empty() {
                a.parse::<usize>().expect("vertex")
            } else {
                n + 1 + b.parse::<usize>().expect("vertex")
            }
        })
        .collect();
    let horn_mask = Subcomplex::from_predicate(&whole, |q, y| {
        let mut s = vec![false; m + 1];
        for v in whole.vertices(q, y) {
            s[place[v as usize]] = true;
        }
        s[k] = true;
        s.contains(&false)
    })?;
    let same = dom == horn_mask;
    let (dom_set, _) = dom.to_sset(&whole)?;
    let iso = find_isomorphism(&dom_set, &Arc::new(horn_trunc(m, k, d)?))?.is_some();
    Ok(Check {
        holds: same && iso,
        detail: format!(
            "domain has {:?} nondegenerate simplices; equals the horn at {k}: {same}; isomorphic to Lambda^{m}_{k}: {iso}",
            dom_set.nondegenerate_counts()
        ),
    })
}

fn alternating(len: usize) -> Vec<usize> {
    (0..len).map(|i| i % 2).collect()
}

/// The filtration of `E^1` by `Z_n`, the nondegenerate `n`-simplex
/// `[0101...]`: checks that `Z_{n+1}` is the pushout of
/// `Z_n <- Lambda^{n+1}_0 -> Delta^{n+1}`, the left map reducing vertex
/// sequences mod 2.
pub fn check_e1_filtration(n: usize) -> Result<Check> {
    check_params(n >= 1, "check_e1_filtration needs n >= 1".into())?;
    let d = n + 2;
    let e = Arc::new(e_space(&["0", "1"], d)?);
    let z = |m: usize| -> Result<Subcomplex> {
        let id = seq_label(&alternating(m + 1), false);
        Ok(Subcomplex::generated(&e, &[(m, e.find_at(m, &id)?)]))
    };
    let (zn, zn_mask, zn1_mask) = {
        let a = z(n)?;
        let (s, _) = a.to_sset(&e)?;
        (s, a, z(n + 1)?)
    };
    let top = Arc::new(delta_trunc(n + 1, d)?);
    let (lam, lam_in) = sub_of(&top, |q, y| {
        let mut s = vertex_set(&top, q, y, n + 2);
        s[0] = true;
        s.contains(&false)
    })?;
    // reduction mod 2 on Delta^{n+1}, landing in E^1
    let reduce = |q: usize, y: Idx| -> Result<Idx> {
        let seq: Vec<usize> = top.vertices(q, y).iter().map(|&v| v as usize % 2).collect();
        e.find_at(q, &seq_label(&seq, false))
    };
    let mut g_levels = Vec::with_capacity(d + 1);
    for q in 0..=d {
        let mut col = Vec::with_capacity(lam.len(q));
        for y in 0..lam.len(q) as Idx {
            let img = reduce(q, lam_in.apply(q, y))?;
            if !zn_mask.contains(q, img) {
                return Ok(Check { holds: false, detail: format!("g leaves Z_{n} at {}", lam.id(q, y)) });
            }
            col.push(zn.find_at(q, e.id(q, img))?);
        }
        g_levels.push(col);
    }
    let g = SMap::new(lam.clone(), zn.clone(), g_levels)?;
    let p = pushout(&lam_in, &g)?;
    // the comparison map from the pushout to E^1
    let mut phi: Vec<Vec<Option<Idx>>> = (0..=d).map(|q| vec![None; p.set.len(q)]).collect();
    let mut consistent = true;
    for q in 0..=d {
        for y in 0..top.len(q) as Idx {
            let v = reduce(q, y)?;
            let slot = &mut phi[q][p.left.apply(q, y) as usize];
            consistent &= slot.is_none_or(|w| w == v);
            *slot = Some(v);
        }
        for y in 0..zn.len(q) as Idx {
            let v = e.find_at(q, zn.id(q, y))?;
            let slot = &mut phi[q][p.right.apply(q, y) as usize];
            consistent &= slot.is_none_or(|w| w == v);
            *slot = Some(v);
        }
    }
    let mut bijective = consistent;
    for q in 0..=d {
        let mut hit = vec![false; e.len(q)];
        for v in phi[q].iter().flatten() {
            bijective &= !std::mem::replace(&mut hit[*v as usize], true);
        }
        bijective &= phi[q].iter().all(Option::is_some);
        bijective &= (0..e.len(q)).all(|v| hit[v] == zn1_mask.contains(q, v as Idx));
    }
    Ok(Check {
        holds: bijective,
        detail: format!(
            "Z_{} = [{}]: pushout of Z_{n} <- Lambda^{}_0 -> Delta^{} maps {} onto it",
            n + 1,
            seq_label(&alternating(n + 2), false),
            n + 1,
            n + 1,
            if bijective { "bijectively" } else { "not bijectively" }
        ),
    })
}

/// Certificate families by name, for the command line.
pub fn generate(family: &str, params: &[usize]) -> Result<Vec<AnodyneCertificate>> {
    let want = |k: usize| -> Result<()> {
        check_params(params.len() == k, format!("family {family} takes {k} parameters, got {}", params.len()))
    };
    match family {
        "spine-simplex" => want(1).and_then(|_| Ok(vec![gen_spine_simplex(params[0])?])),
        "spine" => want(1).and_then(|_| Ok(vec![gen_spine(params[0])?])),
        "squash" => want(2).and_then(|_| Ok(vec![gen_squash(params[0], params[1])?])),
        "cyl-squash" => want(1).and_then(|_| gen_cyl_squash(params[0])),
        "box-inner" => want(3).and_then(|_| Ok(vec![gen_box_inner(params[0], params[1], params[2])?])),
        "box-special" => want(2).and_then(|_| Ok(vec![gen_box_special(params[0], params[1])?])),
        _ => Err(QcError::InvalidParameter(format!(
            "unknown family {family}; expected spine-simplex, spine, squash, cyl-squash, box-inner or box-special"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::delta;

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    fn assert_valid(c: &AnodyneCertificate) {
        let v = verify(c);
        assert!(v.is_valid(), "{v:?}");
    }

    fn by_dim(c: &AnodyneCertificate) -> Vec<usize> {
        let mut counts = vec![0; c.ambient.trunc_dim() + 1];
        for st in &c.steps {
            counts[c.ambient.find(&st.simplex).unwrap().0] += 1;
        }
        counts
    }

    #[test]
    fn spine_simplex_stages_are_binomial() {
        for n in 1..=5 {
            let c = gen_spine_simplex(n).unwrap();
            assert_valid(&c);
            // stage i glues (i + 2)-simplices, C(n, i + 1) of them
            let counts = by_dim(&c);
            for i in 0..n {
                assert_eq!(counts[i + 2], binom(n, i + 1), "n={n} stage {i}");
            }
            assert_eq!(c.steps.len(), (1 << n) - 1);
        }
        assert_eq!(gen_spine_simplex(1).unwrap().steps, vec![Step { simplex: "012".into(), k: 1, class: HornClass::Inner }]);
    }

    #[test]
    fn spines_of_simplices() {
        for m in 1..=4 {
            assert_valid(&gen_spine(m).unwrap());
        }
    }

    #[test]
    fn squash_certificates() {
        for n in 1..=4 {
            for k in 0..n {
                assert_valid(&gen_squash(n, k).unwrap());
            }
            // k = 0: stage i glues C(n - 1, i + 1) simplices
            let c = gen_squash(n, 0).unwrap();
            let counts = by_dim(&c);
            for i in 0..n.saturating_sub(1) {
                assert_eq!(counts[i + 2], binom(n - 1, i + 1));
            }
        }
        assert!(gen_squash(1, 0).unwrap().steps.is_empty());
        let c = gen_squash(3, 1).unwrap();
        assert_eq!(c.start, ["123"]);
        assert!(gen_squash(2, 2).is_err());
    }

    #[test]
    fn cylinder_stages() {
        for n in 0..=3 {
            let cs = gen_cyl_squash(n).unwrap();
            assert_eq!(cs.len(), n + 1);
            for c in &cs {
                assert_valid(c);
            }
            // the last stage ends with every top simplex D_0..D_n
            assert_eq!(cs.last().unwrap().end.as_ref().unwrap().len(), n + 1);
            assert_eq!(cs[0].ambient.nondegenerate_counts()[n + 1], n + 1);
        }
        assert!(gen_cyl_squash(0).unwrap()[0].steps.is_empty());
        let c = &gen_cyl_squash(1).unwrap()[1];
        assert_eq!(c.steps, vec![Step { simplex: "011'".into(), k: 0, class: HornClass::SpecialLeft }]);
    }

    #[test]
    fn box_inner_small_cases() {
        let c = gen_box_inner(2, 1, 1).unwrap();
        assert_valid(&c);
        // Delta^2 x Delta^1 has 3 top simplices (shuffles of 2 and 1), all glued
        assert_eq!(by_dim(&c)[3], 3);
        let c0 = gen_box_inner(2, 1, 0).unwrap();
        assert_valid(&c0);
        assert_eq!(c0.steps.len(), 1);
        assert_eq!(c0.steps[0].k, 1);
        assert_valid(&gen_box_inner(3, 1, 1).unwrap());
        assert!(gen_box_inner(2, 0, 1).is_err());
    }

    #[test]
    fn box_inner_is_exhaustive() {
        let c = gen_box_inner(2, 1, 2).unwrap();
        assert_valid(&c);
        let x = &c.ambient;
        let start = generated(x, &c.start).unwrap();
        let mut added = c.added().unwrap();
        added.sort_unstable();
        let mut expected: Vec<(usize, Idx)> =
            (0..=x.trunc_dim()).flat_map(|n| x.nondegenerate(n).into_iter().map(move |a| (n, a))).filter(|&(n, a)| !start.contains(n, a)).collect();
        expected.sort_unstable();
        assert_eq!(added, expected);
    }

    #[test]
    fn box_special_is_partial_and_staged() {
        let c = gen_box_special(1, 4).unwrap();
        assert!(c.partial);
        assert_eq!(verify(&c), Verdict::Valid { steps: c.steps.len(), verified_dim: 3 });
        assert!(gen_box_special(0, 4).is_err());
        let c = gen_box_special(2, 4).unwrap();
        assert_valid(&c);
        // special left steps, then the inner middle stage, then special right
        let classes: Vec<HornClass> = c.steps.iter().map(|s| s.class).collect();
        let first_inner = classes.iter().position(|&h| h == HornClass::Inner).unwrap();
        let first_right = classes.iter().position(|&h| h == HornClass::SpecialRight).unwrap();
        assert!(classes[..first_inner].iter().all(|&h| h == HornClass::SpecialLeft) && first_inner > 0);
        assert!(classes[first_inner..first_right].iter().all(|&h| h == HornClass::Inner));
        assert!(classes[first_right..].iter().all(|&h| h == HornClass::SpecialRight));
    }

    fn tiny(start: &[&str], simplex: &str, k: usize, class: HornClass) -> AnodyneCertificate {
        let x = Arc::new(delta(2));
        AnodyneCertificate {
            verified_dim: x.trunc_dim(),
            ambient: x,
            start: start.iter().map(|s| s.to_string()).collect(),
            steps: vec![Step { simplex: simplex.into(), k, class }],
            end: None,
            partial: false,
        }
    }

    #[test]
    fn crafted_failures() {
        assert_valid(&tiny(&["01", "12"], "012", 1, HornClass::Inner));
        let v = verify(&tiny(&["01", "02", "12"], "012", 1, HornClass::Inner));
        assert_eq!(v, Verdict::Invalid { step: Some(0), reason: Reason::Bounding });
        // [01] is not invertible in the poset [2]
        let v = verify(&tiny(&["01", "02"], "012", 0, HornClass::SpecialLeft));
        assert_eq!(v, Verdict::Invalid { step: Some(0), reason: Reason::NotSpecial });
        let v = verify(&tiny(&["01", "02"], "012", 0, HornClass::Inner));
        assert_eq!(v, Verdict::Invalid { step: Some(0), reason: Reason::NotInner });
        let v = verify(&tiny(&["01"], "012", 1, HornClass::Inner));
        assert_eq!(v, Verdict::Invalid { step: Some(0), reason: Reason::HornIncomplete(0) });
        let v = verify(&tiny(&["01", "12"], "0123", 1, HornClass::Inner));
        assert!(matches!(v, Verdict::Invalid { step: Some(0), reason: Reason::UnknownSimplex(_) }));
        let v = verify(&tiny(&["01", "12"], "0112", 1, HornClass::Inner));
        assert_eq!(v, Verdict::Invalid { step: Some(0), reason: Reason::Degenerate });
    }

    fn all_mutations(c: &AnodyneCertificate) -> Vec<Mutation> {
        let mut ms: Vec<Mutation> = dependent_swaps(c).unwrap().into_iter().map(|(a, b)| Mutation::Swap(a, b)).collect();
        ms.extend(index_changes(c).unwrap().into_iter().map(|(j, k)| Mutation::ChangeK(j, k)));
        ms.extend((0..c.steps.len()).map(Mutation::Drop));
        ms
    }

    #[test]
    fn every_single_mutation_is_rejected() {
        for c in [gen_spine_simplex(3).unwrap(), gen_squash(3, 1).unwrap(), gen_box_inner(2, 1, 1).unwrap()] {
            for m in all_mutations(&c) {
                assert!(!verify(&mutate(&c, m)).is_valid(), "{m:?} accepted");
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let c = gen_cyl_squash(2).unwrap().pop().unwrap();
        let v = c.to_json();
        let back = AnodyneCertificate::from_json(&v, None).unwrap();
        assert_eq!(back.steps, c.steps);
        assert_eq!(back.end, c.end);
        assert_eq!(back.to_json(), v);
        assert_valid(&back);
    }

    #[test]
    fn joinbox_domains_are_horns() {
        for (n, k, r) in [(2, 1, 1), (1, 1, 0), (2, 2, 1)] {
            let c = check_joinbox(n, k, r).unwrap();
            assert!(c.holds, "{c:?}");
        }
        assert!(check_joinbox(2, 0, 1).is_err());
    }

    #[test]
    fn e1_filtration() {
        for n in [1, 2, 4] {
            let c = check_e1_filtration(n).unwrap();
            assert!(c.holds, "{c:?}");
        }
    }
}
