use super::{Idx, Level, SMap, SSet};
use crate::error::{QcError, Result};
use std::sync::Arc;

/// A sub-simplicial set, given by a levelwise membership mask over an ambient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subcomplex {
    mask: Vec<Vec<bool>>,
}

impl Subcomplex {
    pub(crate) fn from_mask_unchecked(mask: Vec<Vec<bool>>) -> Subcomplex {
        Subcomplex { mask }
    }

    pub fn from_mask(x: &SSet, mask: Vec<Vec<bool>>) -> Result<Subcomplex> {
        if mask.len() != x.trunc_dim() + 1 || mask.iter().enumerate().any(|(n, m)| m.len() != x.len(n)) {
            return Err(QcError::Malformed("subcomplex mask has the wrong shape".into()));
        }
        let s = Subcomplex { mask };
        if !s.is_closed(x) {
            return Err(QcError::NotSubcomplex("mask is not closed under faces and degeneracies".into()));
        }
        Ok(s)
    }

    pub fn empty(x: &SSet) -> Subcomplex {
        Subcomplex { mask: (0..=x.trunc_dim()).map(|n| vec![false; x.len(n)]).collect() }
    }

    pub fn full(x: &SSet) -> Subcomplex {
        Subcomplex { mask: (0..=x.trunc_dim()).map(|n| vec![true; x.len(n)]).collect() }
    }

    /// The smallest subcomplex containing the given simplices.
    pub fn generated(x: &SSet, gens: &[(usize, Idx)]) -> Subcomplex {
        let mut s = Subcomplex::empty(x);
        for &(n, a) in gens {
            s.mask[n][a as usize] = true;
        }
        s.close(x);
        s
    }

    pub fn from_ids(x: &SSet, ids: &[&str]) -> Result<Subcomplex> {
        let gens = ids.iter().map(|id| x.find(id)).collect::<Result<Vec<_>>>()?;
        Ok(Subcomplex::generated(x, &gens))
    }

    /// Simplices satisfying `keep`; fails if that set is not closed.
    pub fn from_predicate(x: &SSet, keep: impl Fn(usize, Idx) -> bool) -> Result<Subcomplex> {
        let mask = (0..=x.trunc_dim())
            .map(|n| (0..x.len(n) as Idx).map(|a| keep(n, a)).collect())
            .collect();
        Subcomplex::from_mask(x, mask)
    }

    /// Adds a simplex and closes up.
    pub fn insert(&mut self, x: &SSet, n: usize, a: Idx) {
        if self.mask[n][a as usize] {
            return;
        }
        // faces first; the old part is already closed, so only new simplices
        // need their degeneracies added
        self.mask[n][a as usize] = true;
        let mut added = vec![(n, a)];
        let mut i = 0;
        while i < added.len() {
            let (m, b) = added[i];
            i += 1;
            if m == 0 {
                continue;
            }
            for j in 0..=m {
                let f = x.face(m, j, b);
                if !self.mask[m - 1][f as usize] {
                    self.mask[m - 1][f as usize] = true;
                    added.push((m - 1, f));
                }
            }
        }
        let d = x.trunc_dim();
        while let Some((m, b)) = added.pop() {
            if m == d {
                continue;
            }
            for j in 0..=m {
                let s = x.degen(m, j, b);
                if !self.mask[m + 1][s as usize] {
                    self.mask[m + 1][s as usize] = true;
                    added.push((m + 1, s));
                }
            }
        }
    }

    fn close(&mut self, x: &SSet) {
        let d = x.trunc_dim();
        for n in (1..=d).rev() {
            for a in 0..x.len(n) {
                if self.mask[n][a] {
                    for i in 0..=n {
                        let f = x.face(n, i, a as Idx) as usize;
                        self.mask[n - 1][f] = true;
                    }
                }
            }
        }
        for n in 0..d {
            for a in 0..x.len(n) {
                if self.mask[n][a] {
                    for i in 0..=n {
                        let s = x.degen(n, i, a as Idx) as usize;
                        self.mask[n + 1][s] = true;
                    }
                }
            }
        }
    }

    pub fn is_closed(&self, x: &SSet) -> bool {
        let d = x.trunc_dim();
        (0..=d).all(|n| {
            (0..x.len(n) as Idx).filter(|&a| self.mask[n][a as usize]).all(|a| {
                (n == 0 || (0..=n).all(|i| self.mask[n - 1][x.face(n, i, a) as usize]))
                    && (n == d || (0..=n).all(|i| self.mask[n + 1][x.degen(n, i, a) as usize]))
            })
        })
    }

    pub fn contains(&self, n: usize, a: Idx) -> bool {
        self.mask.get(n).is_some_and(|m| m[a as usize])
    }

    pub fn mask(&self) -> &[Vec<bool>] {
        &self.mask
    }

    pub fn union(&self, other: &Subcomplex) -> Subcomplex {
        Subcomplex { mask: zip_masks(&self.mask, &other.mask, |a, b| a || b) }
    }

    pub fn intersection(&self, other: &Subcomplex) -> Subcomplex {
        Subcomplex { mask: zip_masks(&self.mask, &other.mask, |a, b| a && b) }
    }

    pub fn is_subset(&self, other: &Subcomplex) -> bool {
        self.mask.iter().zip(&other.mask).all(|(a, b)| a.iter().zip(b).all(|(x, y)| !x || *y))
    }

    pub fn is_empty(&self) -> bool {
        self.mask.iter().all(|m| m.iter().all(|b| !b))
    }

    pub fn count(&self, n: usize) -> usize {
        self.mask[n].iter().filter(|b| **b).count()
    }

    /// Nondegenerate members as `(level, index)`, by level then index.
    pub fn nondegenerate(&self, x: &SSet) -> Vec<(usize, Idx)> {
        (0..=x.trunc_dim())
            .flat_map(|n| {
                x.nondegenerate(n).into_iter().filter(move |&a| self.mask[n][a as usize]).map(move |a| (n, a))
            })
            .collect()
    }

    /// Preimage under a map into the ambient.
    pub fn preimage(&self, f: &SMap) -> Subcomplex {
        let x = f.source();
        let mask = (0..=x.trunc_dim())
            .map(|n| {
                (0..x.len(n) as Idx)
                    .map(|a| n <= f.top() && self.mask[n][f.apply(n, a) as usize])
                    .collect()
            })
            .collect();
        Subcomplex { mask }
    }

    /// The subcomplex as a simplicial set with the same ids, plus its inclusion.
    pub fn to_sset(&self, x: &Arc<SSet>) -> Result<(Arc<SSet>, SMap)> {
        let d = x.trunc_dim();
        let new_index: Vec<Vec<Idx>> = self
            .mask
            .iter()
            .map(|m| {
                let mut c = 0;
                m.iter()
                    .map(|&b| {
                        let v = if b { c } else { Idx::MAX };
                        c += Idx::from(b);
                        v
                    })
                    .collect()
            })
            .collect();
        let members: Vec<Vec<Idx>> = self
            .mask
            .iter()
            .map(|m| m.iter().enumerate().filter(|(_, b)| **b).map(|(a, _)| a as Idx).collect())
            .collect();
        let mut levels = Vec::with_capacity(d + 1);
        for n in 0..=d {
            let mut lv = Level {
                ids: members[n].iter().map(|&a| x.id(n, a).to_string()).collect(),
                ..Level::default()
            };
            if n > 0 {
                for i in 0..=n {
                    lv.faces.push(members[n].iter().map(|&a| new_index[n - 1][x.face(n, i, a) as usize]).collect());
                }
            }
            if n < d {
                for i in 0..=n {
                    lv.degens.push(members[n].iter().map(|&a| new_index[n + 1][x.degen(n, i, a) as usize]).collect());
                }
            }
            levels.push(lv);
        }
        if levels.iter().flat_map(|l| l.faces.iter().chain(&l.degens)).any(|c| c.contains(&Idx::MAX)) {
            return Err(QcError::NotSubcomplex("mask is not closed".into()));
        }
        let sub = Arc::new(SSet::from_levels(levels, true)?);
        let incl = SMap::from_parts(sub.clone(), x.clone(), members);
        Ok((sub, incl))
    }
}

fn zip_masks(a: &[Vec<bool>], b: &[Vec<bool>], op: impl Fn(bool, bool) -> bool) -> Vec<Vec<bool>> {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(p, q)| op(*p, *q)).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::{delta, horn, isomorphic};

    #[test]
    fn generated_horn_matches_constructor() {
        let d = Arc::new(delta(3));
        let s = Subcomplex::from_ids(&d, &["123", "023", "013"]).unwrap();
        let (h, incl) = s.to_sset(&d).unwrap();
        incl.validate().unwrap();
        assert!(isomorphic(&h, &horn(3, 3).unwrap()).unwrap());
        assert!(h.is_stable());
    }

    #[test]
    fn closure_is_checked() {
        let d = delta(2);
        let bad = Subcomplex::from_predicate(&d, |n, a| n == 1 && d.id(1, a) == "01");
        assert!(matches!(bad, Err(QcError::NotSubcomplex(_))));
    }
}
