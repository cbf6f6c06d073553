use proptest::prelude::*;
use qcat::category::{nerve, FinCat, Morphism};
use qcat::homology::{chains, homology, pi0, HomologyGroup};
use qcat::mapping::{hom_model, necklace_model, Model};
use qcat::sset::{
    coskeleton, delta, delta_trunc, enumerate_maps, from_json, is_coskeletal, isomorphic, join, product, to_json,
    Constraints, Idx, SSet, Subcomplex,
};
use std::sync::Arc;

/// The subcomplex of `Delta^n` generated by the chosen nondegenerate simplices,
/// stored through level 5.
fn sub_of_simplex(n: usize, pick: &[bool]) -> Arc<SSet> {
    let s = Arc::new(delta_trunc(n, n + 1).unwrap());
    let all: Vec<(usize, Idx)> = (0..=n).flat_map(|q| s.nondegenerate(q).into_iter().map(move |a| (q, a))).collect();
    let mut gens: Vec<(usize, Idx)> = all.iter().zip(pick.iter().cycle()).filter(|(_, &p)| p).map(|(g, _)| *g).collect();
    if gens.is_empty() {
        gens.push((0, 0));
    }
    let x = Subcomplex::generated(&s, &gens).to_sset(&s).unwrap().0;
    Arc::new(x.with_trunc(5).unwrap())
}

fn complexes() -> impl Strategy<Value = (usize, Arc<SSet>)> {
    (1usize..=4, prop::collection::vec(any::<bool>(), 31)).prop_map(|(n, pick)| (n, sub_of_simplex(n, &pick)))
}

/// A random poset on `0..k`: the transitive closure of random relations `i < j`.
fn random_poset(k: usize, bits: &[bool]) -> (FinCat, Vec<Vec<bool>>) {
    let mut le = vec![vec![false; k]; k];
    let mut t = 0;
    for (i, row) in le.iter_mut().enumerate() {
        row[i] = true;
        for r in row.iter_mut().skip(i + 1) {
            *r = bits[t % bits.len()];
            t += 1;
        }
    }
    for m in 0..k {
        for i in 0..k {
            for j in 0..k {
                if le[i][m] && le[m][j] {
                    le[i][j] = true;
                }
            }
        }
    }
    let mut idx = vec![vec![usize::MAX; k]; k];
    let mut morphisms = Vec::new();
    for a in 0..k {
        for b in 0..k {
            if le[a][b] {
                idx[a][b] = morphisms.len();
                morphisms.push(Morphism { name: format!("m{a}_{b}"), src: a, dst: b });
            }
        }
    }
    let mut table = Vec::new();
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                if le[a][b] && le[b][c] {
                    table.push((idx[b][c], idx[a][b], idx[a][c]));
                }
            }
        }
    }
    let objects = (0..k).map(|i| format!("o{i}")).collect();
    let identity = (0..k).map(|a| idx[a][a]).collect();
    (FinCat::new(objects, morphisms, identity, &table).unwrap(), le)
}

fn posets() -> impl Strategy<Value = (FinCat, Vec<Vec<bool>>)> {
    (1usize..=4, prop::collection::vec(any::<bool>(), 6)).prop_map(|(k, bits)| random_poset(k, &bits))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn audit_and_json_round_trip((_, x) in complexes()) {
        x.audit().unwrap();
        let back = from_json(&to_json(&x)).unwrap();
        prop_assert_eq!(&back, x.as_ref());
    }

    #[test]
    fn yoneda((_, x) in complexes(), n in 0usize..=3) {
        let s = Arc::new(delta(n));
        let maps = enumerate_maps(&s, &x, &Constraints::new()).unwrap();
        prop_assert_eq!(maps.len(), x.len(n));
        let top = s.nondegenerate(n)[0];
        let mut tops: Vec<Idx> = maps.iter().map(|f| f.apply(n, top)).collect();
        tops.sort_unstable();
        prop_assert_eq!(tops, (0..x.len(n) as Idx).collect::<Vec<_>>());
    }

    #[test]
    fn join_counts((_, x) in complexes(), (_, y) in complexes()) {
        let j = join(&x.with_trunc(3).unwrap(), &y.with_trunc(3).unwrap()).unwrap();
        j.audit().unwrap();
        let (nx, ny) = (x.nondegenerate_counts(), y.nondegenerate_counts());
        let at = |v: &[usize], i: usize| v.get(i).copied().unwrap_or(0);
        for q in 0..=j.trunc_dim() {
            let mut want = at(&nx, q) + at(&ny, q);
            for i in 0..q {
                want += at(&nx, i) * at(&ny, q - 1 - i);
            }
            prop_assert_eq!(j.nondegenerate(q).len(), want, "dimension {}", q);
        }
    }

    #[test]
    fn join_of_simplices(n in 0usize..=3, r in 0usize..=2) {
        prop_assert!(isomorphic(&join(&delta(n), &delta(r)).unwrap(), &delta(n + r + 1)).unwrap());
    }

    #[test]
    fn coskeleta_are_coskeletal((_, x) in complexes(), k in 0usize..=2) {
        let x = Arc::new(x.with_trunc(4).unwrap());
        let c = coskeleton(&x, k).unwrap();
        c.audit().unwrap();
        prop_assert!(is_coskeletal(&c, k).unwrap());
    }

    #[test]
    fn boundary_squares_to_zero((_, x) in complexes()) {
        prop_assert!(chains(&x, 4).unwrap().is_complex());
        let p = product(&x.with_trunc(3).unwrap(), &delta_trunc(1, 3).unwrap()).unwrap();
        prop_assert!(chains(&p, 3).unwrap().is_complex());
    }

    #[test]
    fn h0_counts_components((_, x) in complexes()) {
        let h = homology(&x, 0).unwrap();
        prop_assert_eq!(&h.groups[0], &HomologyGroup::free(pi0(&x).len()));
    }

    #[test]
    fn euler_characteristic((n, x) in complexes()) {
        let h = homology(&x, n).unwrap();
        prop_assert!(!h.truncated);
        let nd = x.nondegenerate_counts();
        let chi: i64 = nd.iter().enumerate().map(|(i, &c)| if i % 2 == 0 { c as i64 } else { -(c as i64) }).sum();
        let from_h: i64 = h.groups.iter().enumerate()
            .map(|(i, g)| if i % 2 == 0 { g.betti as i64 } else { -(g.betti as i64) })
            .sum();
        prop_assert_eq!(chi, from_h);
    }

    #[test]
    fn poset_hom_spaces((c, le) in posets(), a in 0usize..4, b in 0usize..4) {
        let k = c.num_objects();
        let (a, b) = (a % k, b % k);
        let x = Arc::new(nerve(&c, 4).unwrap());
        prop_assert!(is_coskeletal(&x, 2).unwrap());
        let h = hom_model(Model::R, &x, &c.objects()[a], &c.objects()[b], 2, 4).unwrap();
        let want = if le[a][b] { vec![1; 3] } else { vec![0; 3] };
        prop_assert_eq!(h.set().level_sizes(), want);
    }

    #[test]
    fn necklaces_grow_with_vertices((c, le) in posets(), a in 0usize..4, b in 0usize..4) {
        let k = c.num_objects();
        let (a, b) = (a % k, b % k);
        let x = Arc::new(nerve(&c, 4).unwrap());
        let (an, bn) = (&c.objects()[a], &c.objects()[b]);
        let mut prev = 0;
        for v in 1..=3 {
            let nm = necklace_model(&x, an, bn, v, 2).unwrap();
            let objects = nm.category.num_objects();
            prop_assert!(objects >= prev);
            prev = objects;
            // one component when a <= b and some necklace fits
            let want = usize::from(le[a][b] && (a == b || v >= 2));
            prop_assert_eq!(pi0(&nm.set).len(), want);
        }
    }
}
