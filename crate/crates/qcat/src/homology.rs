//! Normalized chains, integral homology and path components.
//!
//! Boundary matrices are reduced by a sparse elimination on unit pivots,
//! followed by a dense Smith normal form on whatever is left. Arithmetic is
//! done in `i64` with overflow checks and redone over `BigInt` on overflow.

use crate::error::{QcError, Result};
use crate::sset::{Idx, SMap, SSet};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// A sparse integer matrix stored by columns: `cols[j]` maps row to entry.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: Vec<BTreeMap<usize, i64>>,
}

impl SparseMatrix {
    pub fn new(rows: usize, ncols: usize) -> SparseMatrix {
        SparseMatrix { rows, cols: vec![BTreeMap::new(); ncols] }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn add(&mut self, row: usize, col: usize, v: i64) {
        let e = self.cols[col].entry(row).or_insert(0);
        *e += v;
        if *e == 0 {
            self.cols[col].remove(&row);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(BTreeMap::is_empty)
    }

    /// `self * other`, both sparse.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        let mut out = SparseMatrix::new(self.rows, other.ncols());
        for (j, col) in other.cols.iter().enumerate() {
            for (&k, &b) in col {
                for (&i, &a) in &self.cols[k] {
                    out.add(i, j, a * b);
                }
            }
        }
        out
    }
}

/// Normalized chain complex in degrees `0..=top`.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    /// Nondegenerate simplices per degree, the chain bases.
    pub basis: Vec<Vec<Idx>>,
    /// `boundary[k]` is `C_k -> C_{k-1}`; `boundary[0]` is the zero map.
    pub boundary: Vec<SparseMatrix>,
}

impl ChainComplex {
    pub fn top(&self) -> usize {
        self.basis.len() - 1
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.basis.iter().map(Vec::len).collect()
    }

    pub fn is_complex(&self) -> bool {
        (2..self.boundary.len()).all(|k| self.boundary[k - 1].mul(&self.boundary[k]).is_zero())
    }
}

/// Chains in degrees `0..=m`. Degrees above a stable set's truncation are zero.
pub fn chains(x: &SSet, m: usize) -> Result<ChainComplex> {
    if m > x.trunc_dim() && !x.is_stable() {
        return Err(QcError::InvalidParameter(format!(
            "chains up to degree {m} need {m} stored levels, have {}",
            x.trunc_dim()
        )));
    }
    let mut basis: Vec<Vec<Idx>> = Vec::with_capacity(m + 1);
    let mut pos: Vec<HashMap<Idx, usize>> = Vec::with_capacity(m + 1);
    for n in 0..=m {
        let b = if n <= x.trunc_dim() { x.nondegenerate(n) } else { Vec::new() };
        pos.push(b.iter().enumerate().map(|(i, &a)| (a, i)).collect());
        basis.push(b);
    }
    let mut boundary = vec![SparseMatrix::new(0, basis[0].len())];
    for n in 1..=m {
        let mut d = SparseMatrix::new(basis[n - 1].len(), basis[n].len());
        for (j, &a) in basis[n].iter().enumerate() {
            for i in 0..=n {
                if let Some(&r) = pos[n - 1].get(&x.face(n, i, a)) {
                    d.add(r, j, if i % 2 == 0 { 1 } else { -1 });
                }
            }
        }
        boundary.push(d);
    }
    Ok(ChainComplex { basis, boundary })
}

/// The chain map induced by `f` in degrees `0..=m`, as matrices `C_k(X) -> C_k(Y)`.
pub fn chain_map(f: &SMap, cx: &ChainComplex, cy: &ChainComplex) -> Vec<SparseMatrix> {
    let m = cx.top().min(cy.top());
    (0..=m)
        .map(|n| {
            let pos: HashMap<Idx, usize> = cy.basis[n].iter().enumerate().map(|(i, &a)| (a, i)).collect();
            let mut mat = SparseMatrix::new(cy.basis[n].len(), cx.basis[n].len());
            if n <= f.top() {
                for (j, &a) in cx.basis[n].iter().enumerate() {
                    if let Some(&r) = pos.get(&f.apply(n, a)) {
                        mat.add(r, j, 1);
                    }
                }
            }
            mat
        })
        .collect()
}

trait Ring: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn magnitude_lt(&self, other: &Self) -> bool;
    fn add(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    /// Quotient rounded towards zero.
    fn quot(&self, o: &Self) -> Self;
    fn divides(&self, o: &Self) -> bool;
    fn to_big(&self) -> BigInt;
    fn from_i64(v: i64) -> Self;
}

impl Ring for i64 {
    fn zero() -> Self {
        0
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn magnitude_lt(&self, o: &Self) -> bool {
        self.unsigned_abs() < o.unsigned_abs()
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn quot(&self, o: &Self) -> Self {
        self / o
    }
    fn divides(&self, o: &Self) -> bool {
        o % self == 0
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn from_i64(v: i64) -> Self {
        v
    }
}

impl Ring for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn magnitude_lt(&self, o: &Self) -> bool {
        self.abs() < o.abs()
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn quot(&self, o: &Self) -> Self {
        self / o
    }
    fn divides(&self, o: &Self) -> bool {
        o.is_multiple_of(self)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
}

struct Overflow;

/// `row_t += q * row_s` on a row-major sparse matrix, keeping column indices.
fn axpy<T: Ring>(
    rows: &mut [BTreeMap<usize, T>],
    cols: &mut [BTreeSet<usize>],
    t: usize,
    q: &T,
    s: usize,
) -> std::result::Result<(), Overflow> {
    let src: Vec<(usize, T)> = rows[s].iter().map(|(&c, v)| (c, v.clone())).collect();
    for (c, v) in src {
        let delta = q.mul(&v).ok_or(Overflow)?;
        let cur = rows[t].get(&c).cloned().unwrap_or_else(T::zero);
        let new = cur.add(&delta).ok_or(Overflow)?;
        if new.is_zero() {
            rows[t].remove(&c);
            cols[c].remove(&t);
        } else {
            rows[t].insert(c, new);
            cols[c].insert(t);
        }
    }
    Ok(())
}

/// Nonzero invariant factors, in divisibility order, as absolute values.
fn invariant_factors_in<T: Ring>(m: &SparseMatrix) -> std::result::Result<Vec<BigInt>, Overflow> {
    let ncols = m.ncols();
    let mut rows: Vec<BTreeMap<usize, T>> = vec![BTreeMap::new(); m.rows];
    let mut cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ncols];
    for (j, col) in m.cols.iter().enumerate() {
        for (&i, &v) in col {
            rows[i].insert(j, T::from_i64(v));
            cols[j].insert(i);
        }
    }
    let mut units = 0usize;
    let mut row_alive = vec![true; m.rows];
    let mut col_alive = vec![true; ncols];
    // unit pivots: clear the column by row operations, then drop row and column
    loop {
        let mut progress = false;
        for c in 0..ncols {
            if !col_alive[c] {
                continue;
            }
            let pivot = cols[c]
                .iter()
                .copied()
                .filter(|&r| rows[r][&c].is_unit())
                .min_by_key(|&r| (rows[r].len(), r));
            let Some(p) = pivot else { continue };
            let pv = rows[p][&c].clone();
            let others: Vec<usize> = cols[c].iter().copied().filter(|&r| r != p).collect();
            for r in others {
                // pivot is +-1, so its inverse is itself
                let q = rows[r][&c].mul(&pv).ok_or(Overflow)?.neg().ok_or(Overflow)?;
                axpy(&mut rows, &mut cols, r, &q, p)?;
            }
            for &cc in rows[p].keys() {
                cols[cc].remove(&p);
            }
            rows[p].clear();
            row_alive[p] = false;
            col_alive[c] = false;
            units += 1;
            progress = true;
        }
        if !progress {
            break;
        }
    }
    let rest_rows: Vec<usize> = (0..m.rows).filter(|&r| row_alive[r] && !rows[r].is_empty()).collect();
    let rest_cols: Vec<usize> = (0..ncols).filter(|&c| col_alive[c] && !cols[c].is_empty()).collect();
    let mut dense: Vec<Vec<T>> = rest_rows
        .iter()
        .map(|&r| rest_cols.iter().map(|c| rows[r].get(c).cloned().unwrap_or_else(T::zero)).collect())
        .collect();
    let mut out: Vec<BigInt> = vec![BigInt::one(); units];
    out.extend(dense_snf(&mut dense)?.into_iter().map(|v| v.to_big().abs()));
    Ok(out)
}

fn dense_snf<T: Ring>(a: &mut [Vec<T>]) -> std::result::Result<Vec<T>, Overflow> {
    let nr = a.len();
    let nc = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nr.min(nc) {
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, v) in row.iter().enumerate().skip(t) {
                if !v.is_zero() && best.is_none_or(|(bi, bj)| v.magnitude_lt(&a[bi][bj])) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            let p = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..nr {
                if !a[i][t].is_zero() {
                    let q = a[i][t].quot(&p).neg().ok_or(Overflow)?;
                    for j in t..nc {
                        let v = a[t][j].mul(&q).ok_or(Overflow)?;
                        a[i][j] = a[i][j].add(&v).ok_or(Overflow)?;
                    }
                    clean &= a[i][t].is_zero();
                }
            }
            for j in t + 1..nc {
                if !a[t][j].is_zero() {
                    let q = a[t][j].quot(&p).neg().ok_or(Overflow)?;
                    for row in a.iter_mut().skip(t) {
                        let v = row[t].mul(&q).ok_or(Overflow)?;
                        row[j] = row[j].add(&v).ok_or(Overflow)?;
                    }
                    clean &= a[t][j].is_zero();
                }
            }
            if !clean {
                // a remainder is smaller than the pivot: move it in
                let mut best = (t, t);
                for i in t..nr {
                    if !a[i][t].is_zero() && a[i][t].magnitude_lt(&a[best.0][best.1]) {
                        best = (i, t);
                    }
                }
                for j in t..nc {
                    if !a[t][j].is_zero() && a[t][j].magnitude_lt(&a[best.0][best.1]) {
                        best = (t, j);
                    }
                }
                a.swap(t, best.0);
                for row in a.iter_mut() {
                    row.swap(t, best.1);
                }
                continue;
            }
            let bad = (t + 1..nr).find(|&i| (t + 1..nc).any(|j| !p.divides(&a[i][j])));
            match bad {
                Some(i) => {
                    for j in t..nc {
                        a[t][j] = a[t][j].add(&a[i][j]).ok_or(Overflow)?;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].clone());
        t += 1;
    }
    Ok(diag)
}

/// Nonzero invariant factors of an integer matrix.
pub fn invariant_factors(m: &SparseMatrix) -> Vec<BigInt> {
    match invariant_factors_in::<i64>(m) {
        Ok(v) => v,
        Err(Overflow) => invariant_factors_in::<BigInt>(m).unwrap_or_else(|_| unreachable!()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub betti: usize,
    /// Torsion coefficients greater than one, in divisibility order.
    #[serde(serialize_with = "ser_big")]
    pub torsion: Vec<BigInt>,
}

fn ser_big<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for b in v {
        seq.serialize_element(&b.to_string())?;
    }
    seq.end()
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }

    pub fn free(betti: usize) -> HomologyGroup {
        HomologyGroup { betti, torsion: Vec::new() }
    }
}

impl std::fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".into()),
            b => parts.push(format!("Z^{b}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Homology {
    pub groups: Vec<HomologyGroup>,
    /// Set when the request was cut down to `trunc_dim - 1` for an unstable set.
    pub truncated: bool,
}

fn groups_from(c: &ChainComplex, upto: usize) -> Vec<HomologyGroup> {
    let factors: Vec<Vec<BigInt>> = c.boundary.iter().map(invariant_factors).collect();
    (0..=upto)
        .map(|k| {
            let rank_in = factors[k].len();
            let rank_out = factors.get(k + 1).map_or(0, Vec::len);
            let torsion = factors
                .get(k + 1)
                .map(|f| f.iter().filter(|v| !v.is_one()).cloned().collect())
                .unwrap_or_default();
            HomologyGroup { betti: c.basis[k].len() - rank_in - rank_out, torsion }
        })
        .collect()
}

/// `H_0 .. H_m`. For unstable sets degrees are capped at `trunc_dim - 1`.
pub fn homology(x: &SSet, m: usize) -> Result<Homology> {
    let (upto, truncated) = if x.is_stable() || m < x.trunc_dim() {
        (m, false)
    } else if x.trunc_dim() == 0 {
        return Ok(Homology { groups: Vec::new(), truncated: true });
    } else {
        (x.trunc_dim() - 1, true)
    };
    let c = chains(x, upto + 1)?;
    Ok(Homology { groups: groups_from(&c, upto), truncated })
}

/// Path components as sorted vertex lists, ordered by least vertex.
pub fn pi0(x: &SSet) -> Vec<Vec<Idx>> {
    let n = x.len(0);
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    if x.trunc_dim() >= 1 {
        for e in 0..x.len(1) as Idx {
            let a = find(&mut parent, x.face(1, 0, e) as usize);
            let b = find(&mut parent, x.face(1, 1, e) as usize);
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<Idx>> = BTreeMap::new();
    for v in 0..n {
        let r = find(&mut parent, v);
        classes.entry(r).or_default().push(v as Idx);
    }
    classes.into_values().collect()
}

/// Whether every path component has vanishing reduced homology in degrees
/// `1..=m`, and `H_0` is free on the components.
pub fn components_acyclic(x: &SSet, m: usize) -> Result<bool> {
    let h = homology(x, m)?;
    let comps = pi0(x).len();
    Ok(h.groups.first().is_none_or(|g| *g == HomologyGroup::free(comps))
        && h.groups.iter().skip(1).all(HomologyGroup::is_zero))
}

/// The first degree `k <= q` at which `f_*: H_k(X) -> H_k(Y)` fails to be an
/// isomorphism, or `None`.
///
/// Surjectivity in each degree is read off the mapping cone; an abstract
/// isomorphism of the two groups then upgrades a surjection to a bijection,
/// since finitely generated abelian groups are Hopfian.
pub fn first_homology_failure(f: &SMap, q: usize) -> Result<Option<usize>> {
    let (x, y) = (f.source(), f.target());
    let cx = chains(x, q + 1)?;
    let cy = chains(y, q + 1)?;
    let hx = groups_from(&cx, q);
    let hy = groups_from(&cy, q);
    let phi = chain_map(f, &cx, &cy);
    // cone_k = C_{k-1}(X) + C_k(Y), boundary (x, y) -> (-dx, f x + dy)
    let cone_rank = |k: usize| if k == 0 { cy.basis[0].len() } else { cx.basis[k - 1].len() + cy.basis[k].len() };
    let mut cone_d: Vec<SparseMatrix> = vec![SparseMatrix::new(0, cone_rank(0))];
    for k in 1..=q + 1 {
        let mut d = SparseMatrix::new(cone_rank(k - 1), cone_rank(k));
        let xoff_out = if k >= 2 { cx.basis[k - 2].len() } else { 0 };
        let xin = cx.basis[k - 1].len();
        for j in 0..xin {
            if k >= 2 {
                for (&r, &v) in &cx.boundary[k - 1].cols[j] {
                    d.add(r, j, -v);
                }
            }
            for (&r, &v) in &phi[k - 1].cols[j] {
                d.add(xoff_out + r, j, v);
            }
        }
        for j in 0..cy.basis[k].len() {
            for (&r, &v) in &cy.boundary[k].cols[j] {
                d.add(xoff_out + r, xin + j, v);
            }
        }
        cone_d.push(d);
    }
    let factors: Vec<Vec<BigInt>> = cone_d.iter().map(invariant_factors).collect();
    for k in 0..=q {
        let cone_h_rank = cone_rank(k) - factors[k].len() - factors[k + 1].len();
        let cone_torsion = factors[k + 1].iter().any(|v| !v.is_one());
        // H_k(cone) = 0 makes f_* onto in degree k
        if cone_h_rank != 0 || cone_torsion || hx[k] != hy[k] {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::{boundary, delta, quotient, Subcomplex};
    use std::sync::Arc;

    fn from_dense(rows: &[&[i64]]) -> SparseMatrix {
        let mut m = SparseMatrix::new(rows.len(), rows.first().map_or(0, |r| r.len()));
        for (i, r) in rows.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                m.add(i, j, v);
            }
        }
        m
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn snf_small_matrices() {
        assert_eq!(invariant_factors(&from_dense(&[&[2, 0], &[0, 3]])), big(&[1, 6]));
        assert_eq!(invariant_factors(&from_dense(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]])), big(&[2, 6, 12]));
        assert_eq!(invariant_factors(&from_dense(&[&[0, 0], &[0, 0]])), big(&[]));
    }

    #[test]
    fn snf_survives_overflow() {
        let h = i64::MAX / 2 + 1;
        let m = from_dense(&[&[h, 0], &[0, h]]);
        let f = invariant_factors(&m);
        assert_eq!(f.len(), 2);
        assert_eq!(f[1], BigInt::from(h));
    }

    #[test]
    fn sphere_and_circle() {
        let h = homology(&boundary(3), 2).unwrap();
        assert_eq!(h.groups, vec![HomologyGroup::free(1), HomologyGroup::free(0), HomologyGroup::free(1)]);
        let d1 = Arc::new(delta(1));
        let ends = Subcomplex::from_ids(&d1, &["0", "1"]).unwrap();
        let s1 = quotient(&d1, &ends).unwrap().set;
        let h = homology(&s1, 1).unwrap();
        assert_eq!(h.groups, vec![HomologyGroup::free(1), HomologyGroup::free(1)]);
    }

    #[test]
    fn chain_ranks_are_binomial() {
        let c = chains(&delta(3), 3).unwrap();
        assert_eq!(c.ranks(), vec![4, 6, 4, 1]);
        assert!(c.is_complex());
    }

    #[test]
    fn pi0_of_boundary_of_interval() {
        assert_eq!(pi0(&boundary(1)).len(), 2);
    }

    #[test]
    fn unstable_truncation_is_tagged() {
        let e = crate::sset::e_space(&["0", "1"], 3).unwrap();
        let h = homology(&e, 5).unwrap();
        assert!(h.truncated);
        assert_eq!(h.groups.len(), 3);
        assert!(h.groups[1..].iter().all(HomologyGroup::is_zero));
    }
}
