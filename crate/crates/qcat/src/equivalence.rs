//! Refutable checks of DK-equivalence and of agreement between the
//! mapping-space models. A positive answer is evidence at the stated bounds,
//! never a proof.

use crate::error::{QcError, Result};
use crate::homology::{first_homology_failure, homology, pi0, HomologyGroup};
use crate::homotopy::iso_classes;
use crate::horn::verify_quasi_category;
use crate::mapping::{comparison_maps, hom_model_idx, necklace_model, prepared, HomModel, Model};
use crate::sset::{Idx, SMap, SSet};
use serde::Serialize;
use std::collections::{HashMap, HashSet};
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub max_dim: usize,
    pub trunc: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_vertices: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Induced map on isomorphism classes of objects is not a bijection.
    IsoClasses { source: usize, target: usize, image: usize },
    /// Mapping spaces between the images of `a` and `b` differ in `pi_0`.
    Pi0 { a: String, b: String, source: usize, target: usize },
    /// Mapping spaces differ in homology in this degree.
    Homology { a: String, b: String, degree: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Status {
    Consistent,
    Refuted { witness: Witness },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairRecord {
    pub a: String,
    pub b: String,
    pub model: Model,
    pub pi0: (usize, usize),
    pub pi0_bijective: bool,
    /// First degree at which homology is not preserved, if any.
    pub homology_failure: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceVerdict {
    #[serde(flatten)]
    pub status: Status,
    pub bounds: Bounds,
    /// Isomorphism classes in source and target.
    pub iso_classes: (usize, usize),
    pub pairs: Vec<PairRecord>,
}

impl EquivalenceVerdict {
    pub fn is_consistent(&self) -> bool {
        self.status == Status::Consistent
    }
}

/// Whether `f` induces a bijection on path components.
pub fn pi0_bijective(f: &SMap) -> bool {
    let (cx, cy) = (pi0(f.source()), pi0(f.target()));
    let mut class_y = vec![0usize; f.target().len(0)];
    for (c, vs) in cy.iter().enumerate() {
        for &v in vs {
            class_y[v as usize] = c;
        }
    }
    let image: HashSet<usize> = cx.iter().map(|vs| class_y[f.apply(0, vs[0]) as usize]).collect();
    image.len() == cx.len() && image.len() == cy.len()
}

/// `f . -` from a model for `X` to the model for `Y` at the image vertices.
fn postcompose(f: &SMap, from: &HomModel, to: &HomModel) -> Result<SMap> {
    let cut = from.trunc.min(to.trunc).min(f.top());
    let m = from.max_dim;
    let mut levels = Vec::with_capacity(m + 1);
    for n in 0..=m {
        let lookup: HashMap<&[Vec<Idx>], Idx> = to.space.tables[n]
            .iter()
            .enumerate()
            .map(|(j, t)| (&t[..=cut], j as Idx))
            .collect();
        let col = from.space.tables[n]
            .iter()
            .map(|h| {
                let k: Vec<Vec<Idx>> =
                    (0..=cut).map(|q| h[q].iter().map(|&y| f.apply(q, y)).collect()).collect();
                lookup
                    .get(k.as_slice())
                    .copied()
                    .ok_or_else(|| QcError::InvalidParameter(format!("postcomposition leaves level {n}")))
            })
            .collect::<Result<Vec<Idx>>>()?;
        levels.push(col);
    }
    SMap::new(from.space.set.clone(), to.space.set.clone(), levels)
}

fn pair_record(f: &SMap, x: &Arc<SSet>, y: &Arc<SSet>, a: Idx, b: Idx, m: usize, d: usize) -> Result<PairRecord> {
    let hx = hom_model_idx(Model::Cyl, x, a, b, m, d)?;
    let hy = hom_model_idx(Model::Cyl, y, f.apply(0, a), f.apply(0, b), m, d)?;
    let g = postcompose(f, &hx, &hy)?;
    let bij = pi0_bijective(&g);
    let failure = if bij && m >= 1 { first_homology_failure(&g, m - 1)? } else { None };
    Ok(PairRecord {
        a: x.id(0, a).to_string(),
        b: x.id(0, b).to_string(),
        model: Model::Cyl,
        pi0: (pi0(hx.set()).len(), pi0(hy.set()).len()),
        pi0_bijective: bij,
        homology_failure: failure,
    })
}

/// Checks both conditions of DK-equivalence for `f: X -> Y` between
/// quasi-categories verified up to dimension 3: a bijection on isomorphism
/// classes of objects, and for every pair of vertices a `pi_0` bijection
/// and homology isomorphisms up to degree `m - 1` on the cylinder model.
pub fn dk_check(f: &SMap, m: usize, d: usize) -> Result<EquivalenceVerdict> {
    let (x0, y0) = (f.source(), f.target());
    let qx = verify_quasi_category(x0, 3)?;
    let qy = verify_quasi_category(y0, 3)?;
    let (cx, cy) = (iso_classes(qx.ho()?), iso_classes(qy.ho()?));
    let mut class_y = vec![0usize; y0.len(0)];
    for (c, vs) in cy.iter().enumerate() {
        for &v in vs {
            class_y[v] = c;
        }
    }
    let image: HashSet<usize> = cx.iter().map(|vs| class_y[f.apply(0, vs[0] as Idx) as usize]).collect();
    let bounds = Bounds { max_dim: m, trunc: d, max_vertices: None };
    let iso = (cx.len(), cy.len());
    if image.len() != cx.len() || image.len() != cy.len() {
        return Ok(EquivalenceVerdict {
            status: Status::Refuted {
                witness: Witness::IsoClasses { source: cx.len(), target: cy.len(), image: image.len() },
            },
            bounds,
            iso_classes: iso,
            pairs: Vec::new(),
        });
    }
    let x = prepared(x0, m + 2)?;
    let y = prepared(y0, m + 2)?;
    let mut pairs = Vec::new();
    let mut status = Status::Consistent;
    for a in 0..x.len(0) as Idx {
        for b in 0..x.len(0) as Idx {
            let rec = pair_record(f, &x, &y, a, b, m, d)?;
            if status == Status::Consistent {
                if !rec.pi0_bijective {
                    status = Status::Refuted {
                        witness: Witness::Pi0 { a: rec.a.clone(), b: rec.b.clone(), source: rec.pi0.0, target: rec.pi0.1 },
                    };
                } else if let Some(k) = rec.homology_failure {
                    status = Status::Refuted {
                        witness: Witness::Homology { a: rec.a.clone(), b: rec.b.clone(), degree: k },
                    };
                }
            }
            pairs.push(rec);
        }
    }
    Ok(EquivalenceVerdict { status, bounds, iso_classes: iso, pairs })
}

/// Re-runs the comparison named by a witness; true when the failure recurs.
pub fn replay(f: &SMap, witness: &Witness, m: usize, d: usize) -> Result<bool> {
    match witness {
        Witness::IsoClasses { .. } => {
            Ok(matches!(dk_check(f, m, d)?.status, Status::Refuted { witness: w } if w == *witness))
        }
        Witness::Pi0 { a, b, .. } | Witness::Homology { a, b, .. } => {
            let x = prepared(f.source(), m + 2)?;
            let y = prepared(f.target(), m + 2)?;
            let rec = pair_record(f, &x, &y, x.find_at(0, a)?, x.find_at(0, b)?, m, d)?;
            Ok(match witness {
                Witness::Pi0 { .. } => !rec.pi0_bijective,
                Witness::Homology { degree, .. } => rec.homology_failure == Some(*degree),
                Witness::IsoClasses { .. } => unreachable!(),
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModelSummary {
    pub model: String,
    pub level_sizes: Vec<usize>,
    pub pi0: usize,
    /// Every component has vanishing reduced homology up to `m - 1`.
    pub components_acyclic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MapSummary {
    pub from: String,
    pub to: String,
    pub pi0_bijective: bool,
    pub homology_failure: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AgreementReport {
    pub bounds: Bounds,
    pub models: Vec<ModelSummary>,
    pub maps: Vec<MapSummary>,
    pub notices: Vec<String>,
    /// No model disagrees with another on `pi_0` or componentwise acyclicity,
    /// and every comparison map passes.
    pub agree: bool,
}

fn acyclic_components(x: &SSet, top: usize) -> Result<bool> {
    if top == 0 {
        return Ok(true);
    }
    let h = homology(x, top)?;
    let comps = pi0(x).len();
    Ok(h.groups.first().is_none_or(|g| *g == HomologyGroup::free(comps))
        && h.groups.iter().skip(1).all(HomologyGroup::is_zero))
}

fn summary(name: &str, x: &SSet, m: usize) -> Result<ModelSummary> {
    Ok(ModelSummary {
        model: name.to_string(),
        level_sizes: x.level_sizes(),
        pi0: pi0(x).len(),
        components_acyclic: acyclic_components(x, m.saturating_sub(1))?,
    })
}

/// Computes every available model of the mapping space from `a` to `b` and
/// compares them. The necklace model uses at most `v` vertices.
pub fn model_agreement(s: &Arc<SSet>, a: &str, b: &str, m: usize, d: usize, v: usize) -> Result<AgreementReport> {
    let cmp = comparison_maps(s, a, b, m, d)?;
    let mut notices = Vec::new();
    let mut models = vec![
        summary("R", cmp.r.set(), m)?,
        summary("L", cmp.l.set(), m)?,
        summary("cyl", cmp.cyl.set(), m)?,
    ];
    match &cmp.e {
        Some(e) => models.push(summary("E", e.set(), m)?),
        None => notices.push("E model skipped: target is not coskeletal".into()),
    }
    let nm = necklace_model(s, a, b, v, m)?;
    models.push(summary("necklace", &nm.set, m)?);
    notices.push(format!("necklace model bounded by {v} vertices"));
    let mut maps = Vec::new();
    let mut arrows: Vec<(&str, &SMap)> = vec![("R", &cmp.r_to_cyl), ("L", &cmp.l_to_cyl)];
    if let Some(g) = &cmp.e_to_cyl {
        arrows.push(("E", g));
    }
    for (name, g) in arrows {
        let bij = pi0_bijective(g);
        let failure = if bij && m >= 1 { first_homology_failure(g, m - 1)? } else { None };
        maps.push(MapSummary { from: name.into(), to: "cyl".into(), pi0_bijective: bij, homology_failure: failure });
    }
    let agree = models.windows(2).all(|w| w[0].pi0 == w[1].pi0)
        && models.iter().all(|s| s.components_acyclic)
        && maps.iter().all(|g| g.pi0_bijective && g.homology_failure.is_none());
    Ok(AgreementReport {
        bounds: Bounds { max_dim: m, trunc: d, max_vertices: Some(v) },
        models,
        maps,
        notices,
        agree,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContractibilityEvidence {
    pub holds: bool,
    pub pi0: usize,
    /// First degree with nonvanishing reduced homology.
    pub failing_degree: Option<usize>,
    pub checked_up_to: usize,
}

/// One path component and vanishing reduced homology in degrees `< m`.
pub fn contractibility_evidence(k: &SSet, m: usize) -> Result<ContractibilityEvidence> {
    let comps = pi0(k).len();
    let top = m.saturating_sub(1);
    let h = homology(k, top)?;
    let failing = h.groups.iter().enumerate().find_map(|(i, g)| {
        let bad = if i == 0 { *g != HomologyGroup::free(1) } else { !g.is_zero() };
        bad.then_some(i)
    });
    let checked = h.groups.len().saturating_sub(1);
    Ok(ContractibilityEvidence { holds: comps == 1 && failing.is_none(), pi0: comps, failing_degree: failing, checked_up_to: checked })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{codiscrete, cyclic_group, discrete, nerve, nerve_map, poset, FinCat, Functor};
    use crate::mapping::hom_model;
    use crate::sset::{boundary, delta_trunc, e_space, enumerate_maps, point, Constraints};

    fn nerve_arc(c: &FinCat) -> Arc<SSet> {
        Arc::new(nerve(c, 6).unwrap())
    }

    #[test]
    fn identity_is_consistent() {
        let x = nerve_arc(&cyclic_group(2));
        let v = dk_check(&SMap::identity(&x), 3, 5).unwrap();
        assert!(v.is_consistent(), "{v:?}");
        assert_eq!(v.pairs.len(), 1);
    }

    #[test]
    fn collapse_of_the_arrow_is_refuted() {
        let x = nerve_arc(&poset(1));
        let y = Arc::new(point().extend_to(6).unwrap());
        let f = enumerate_maps(&x, &y, &Constraints::new()).unwrap().remove(0);
        let v = dk_check(&f, 3, 5).unwrap();
        let Status::Refuted { witness } = &v.status else { panic!("{v:?}") };
        assert_eq!(*witness, Witness::IsoClasses { source: 2, target: 1, image: 1 });
        assert!(replay(&f, witness, 3, 5).unwrap());
    }

    #[test]
    fn groupoid_to_point_is_consistent() {
        let c = codiscrete(&["p", "q"]);
        let d = discrete(&["*"]);
        let fun = Functor { obj: vec![0, 0], mor: vec![0; c.num_morphisms()] };
        let (nc, nd) = (nerve_arc(&c), nerve_arc(&d));
        let f = nerve_map(&fun, &nc, &nd, &c, &d).unwrap();
        let v = dk_check(&f, 3, 5).unwrap();
        assert!(v.is_consistent(), "{v:?}");
        assert_eq!(v.pairs.len(), 4);
    }

    #[test]
    fn z2_to_point_is_refuted_on_pi0() {
        let c = cyclic_group(2);
        let d = discrete(&["*"]);
        let fun = Functor { obj: vec![0], mor: vec![0; c.num_morphisms()] };
        let f = nerve_map(&fun, &nerve_arc(&c), &nerve_arc(&d), &c, &d).unwrap();
        let v = dk_check(&f, 2, 4).unwrap();
        let Status::Refuted { witness } = &v.status else { panic!("{v:?}") };
        assert!(matches!(witness, Witness::Pi0 { source: 2, target: 1, .. }));
        assert!(replay(&f, witness, 2, 4).unwrap());
    }

    #[test]
    fn agreement_on_nerves() {
        let c = cyclic_group(2);
        let r = model_agreement(&nerve_arc(&c), "x", "x", 3, 5, 3).unwrap();
        assert!(r.agree, "{r:?}");
        assert!(r.models.iter().all(|m| m.pi0 == 2));
        let p = nerve_arc(&poset(1));
        let r = model_agreement(&p, "1", "0", 2, 4, 3).unwrap();
        assert!(r.agree && r.models.iter().all(|m| m.level_sizes.iter().all(|&n| n == 0)), "{r:?}");
    }

    #[test]
    fn simplex_models_are_singletons() {
        let s = Arc::new(delta_trunc(3, 4).unwrap());
        let r = model_agreement(&s, "0", "3", 3, 5, 3).unwrap();
        for m in r.models.iter().filter(|m| m.model != "necklace") {
            assert_eq!(m.level_sizes, vec![1; 4], "{}", m.model);
        }
        let h = hom_model(Model::R, &s, "0", "3", 3, 5).unwrap();
        assert!(contractibility_evidence(h.set(), 3).unwrap().holds);
    }

    #[test]
    fn contractibility() {
        let c = contractibility_evidence(&boundary(2), 3).unwrap();
        assert!(!c.holds);
        assert_eq!(c.failing_degree, Some(1));
        let e = e_space(&["0", "1"], 5).unwrap();
        let ev = contractibility_evidence(&e, 5).unwrap();
        assert!(ev.holds);
        assert_eq!(ev.checked_up_to, 4);
    }
}
