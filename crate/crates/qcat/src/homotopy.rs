//! The homotopy category of a verified quasi-category.

use crate::category::{FinCat, Morphism};
use crate::error::{QcError, Result};
use crate::horn::QuasiCategory;
use crate::sset::{Idx, SSet};
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct HoCategory {
    pub base: FinCat,
    /// Morphism of `base` for each 1-simplex, by index.
    pub edge_class: Vec<usize>,
    set: Arc<SSet>,
}

impl HoCategory {
    pub fn set(&self) -> &Arc<SSet> {
        &self.set
    }

    pub fn class_of(&self, edge: Idx) -> usize {
        self.edge_class[edge as usize]
    }

    pub fn is_invertible(&self, edge: Idx) -> bool {
        self.base.is_iso(self.class_of(edge))
    }
}

fn find(p: &mut [usize], mut i: usize) -> usize {
    while p[i] != i {
        p[i] = p[p[i]];
        i = p[i];
    }
    i
}

/// Objects are vertices; morphisms are edges up to the relation witnessed by
/// 2-simplices with degenerate `d_0`; `h = g . f` when some 2-simplex has
/// faces `(g, h, f)`. Each morphism is named after its least edge.
pub fn ho_category(q: &QuasiCategory) -> Result<HoCategory> {
    if q.verified_dim() < 3 {
        return Err(QcError::NotVerifiedQuasiCategory(format!(
            "inner horns verified only up to dimension {}",
            q.verified_dim()
        )));
    }
    let x = q.set();
    let ne = x.len(1);
    let mut parent: Vec<usize> = (0..ne).collect();
    for s in 0..x.len(2) as Idx {
        let [d0, d1, d2] = [0, 1, 2].map(|i| x.face(2, i, s));
        if x.is_degenerate(1, d0) {
            let (a, b) = (find(&mut parent, d1 as usize), find(&mut parent, d2 as usize));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut class_index: BTreeMap<usize, usize> = BTreeMap::new();
    let mut edge_class = vec![0; ne];
    let mut morphisms = Vec::new();
    for e in 0..ne {
        let r = find(&mut parent, e);
        let next = class_index.len();
        let c = *class_index.entry(r).or_insert_with(|| {
            morphisms.push(Morphism {
                name: x.id(1, r as Idx).to_string(),
                src: x.face(1, 1, r as Idx) as usize,
                dst: x.face(1, 0, r as Idx) as usize,
            });
            next
        });
        edge_class[e] = c;
    }
    let identity: Vec<usize> = (0..x.len(0) as Idx).map(|v| edge_class[x.degen(0, 0, v) as usize]).collect();
    let mut comp: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for s in 0..x.len(2) as Idx {
        let [d0, d1, d2] = [0, 1, 2].map(|i| edge_class[x.face(2, i, s) as usize]);
        if let Some(prev) = comp.insert((d0, d2), d1) {
            if prev != d1 {
                return Err(QcError::TheoremViolation(format!(
                    "composite of {} and {} is not well defined",
                    morphisms[d0].name, morphisms[d2].name
                )));
            }
        }
    }
    let m = morphisms.len();
    for g in 0..m {
        for f in 0..m {
            if morphisms[f].dst == morphisms[g].src && !comp.contains_key(&(g, f)) {
                return Err(QcError::FillerNotFound(format!(
                    "no 2-simplex composes {} after {}",
                    morphisms[g].name, morphisms[f].name
                )));
            }
        }
    }
    let table: Vec<(usize, usize, usize)> = comp.into_iter().map(|((g, f), h)| (g, f, h)).collect();
    let objects = (0..x.len(0) as Idx).map(|v| x.id(0, v).to_string()).collect();
    let base = FinCat::new(objects, morphisms, identity, &table)
        .map_err(|e| QcError::TheoremViolation(format!("homotopy category: {e}")))?;
    Ok(HoCategory { base, edge_class, set: x.clone() })
}

/// Objects grouped by "an invertible morphism exists between them".
pub fn iso_classes(h: &HoCategory) -> Vec<Vec<usize>> {
    let c = &h.base;
    let n = c.num_objects();
    let mut parent: Vec<usize> = (0..n).collect();
    for f in 0..c.num_morphisms() {
        if c.is_iso(f) {
            let (a, b) = (find(&mut parent, c.src(f)), find(&mut parent, c.dst(f)));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for o in 0..n {
        let r = find(&mut parent, o);
        classes.entry(r).or_default().push(o);
    }
    classes.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{codiscrete, cyclic_group, find_isomorphism, nerve, poset};
    use crate::horn::verify_quasi_category;
    use crate::sset::e_space;

    fn ho_of(x: SSet) -> HoCategory {
        let q = verify_quasi_category(&Arc::new(x), 3).unwrap();
        ho_category(&q).unwrap()
    }

    #[test]
    fn nerves_recover_their_category() {
        for c in [poset(2), cyclic_group(2), cyclic_group(3), codiscrete(&["a", "b"])] {
            let h = ho_of(nerve(&c, 4).unwrap());
            assert!(find_isomorphism(&h.base, &c).is_some());
        }
    }

    #[test]
    fn z2_generator_squares_to_identity() {
        let c = cyclic_group(2);
        let h = ho_of(nerve(&c, 4).unwrap());
        let g = h.base.morphism_index("g").unwrap();
        assert_eq!(h.base.compose(g, g), Some(h.base.identity(0)));
    }

    #[test]
    fn iso_classes_of_interval_and_e_space() {
        let h = ho_of(nerve(&poset(1), 4).unwrap());
        assert_eq!(iso_classes(&h), vec![vec![0], vec![1]]);
        let h = ho_of(e_space(&["0", "1"], 4).unwrap());
        assert_eq!(iso_classes(&h), vec![vec![0, 1]]);
    }

    #[test]
    fn unverified_input_is_refused() {
        let q = verify_quasi_category(&Arc::new(nerve(&poset(1), 4).unwrap()), 2).unwrap();
        assert!(matches!(ho_category(&q), Err(QcError::NotVerifiedQuasiCategory(_))));
    }
}
