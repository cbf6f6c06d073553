use super::{monotone_maps, seq_label, Idx, SMap, SSet, DEFAULT_TRUNC};
use crate::error::{QcError, Result};
use std::collections::HashMap;
use std::sync::Arc;

fn simplex_keys(n: usize, d: usize, keep: impl Fn(&[usize]) -> bool) -> Vec<Vec<Vec<usize>>> {
    (0..=d)
        .map(|q| monotone_maps(q, n).into_iter().filter(|s| keep(s)).collect())
        .collect()
}

fn simplex_like(n: usize, d: usize, keep: impl Fn(&[usize]) -> bool) -> Result<SSet> {
    let wide = n >= 10;
    let keys = simplex_keys(n, d, keep);
    let x = SSet::from_keys(
        keys,
        |s, i| {
            let mut t = s.clone();
            t.remove(i);
            t
        },
        |s, i| {
            let mut t = s.clone();
            t.insert(i, s[i]);
            t
        },
        |s| seq_label(s, wide),
        true,
    )?;
    x.set_coskeletal_hint(Some(if n == 0 { 0 } else { 1 }));
    Ok(x)
}

/// The standard simplex, truncated at `max(8, n + 1)`.
pub fn delta(n: usize) -> SSet {
    delta_trunc(n, DEFAULT_TRUNC.max(n + 1)).expect("simplex construction")
}

pub fn delta_trunc(n: usize, d: usize) -> Result<SSet> {
    simplex_like(n, d, |_| true)
}

fn vertex_mask(s: &[usize], n: usize) -> Vec<bool> {
    let mut m = vec![false; n + 1];
    for &v in s {
        m[v] = true;
    }
    m
}

/// The boundary of the `n`-simplex.
pub fn boundary(n: usize) -> SSet {
    boundary_trunc(n, DEFAULT_TRUNC.max(n + 1)).expect("boundary construction")
}

pub fn boundary_trunc(n: usize, d: usize) -> Result<SSet> {
    let x = simplex_like(n, d, |s| vertex_mask(s, n).iter().any(|b| !b))?;
    SSet::from_levels(x.levels.clone(), true)
}

/// The horn: faces of the `n`-simplex other than the one opposite vertex `k`.
pub fn horn(n: usize, k: usize) -> Result<SSet> {
    horn_trunc(n, k, DEFAULT_TRUNC.max(n + 1))
}

pub fn horn_trunc(n: usize, k: usize, d: usize) -> Result<SSet> {
    if n == 0 || k > n {
        return Err(QcError::InvalidParameter(format!("horn({n},{k}) needs 0 <= k <= n, n >= 1")));
    }
    let x = simplex_like(n, d, |s| {
        let mut m = vertex_mask(s, n);
        m[k] = true;
        m.iter().any(|b| !b)
    })?;
    SSet::from_levels(x.levels.clone(), true)
}

pub fn point() -> SSet {
    delta(0)
}

/// The empty simplicial set truncated at `d`.
pub fn empty(d: usize) -> SSet {
    let keys: Vec<Vec<u8>> = vec![Vec::new(); d + 1];
    SSet::from_keys(keys, |_, _| 0, |_, _| 0, |_| String::new(), true).expect("empty set")
}

fn tuple_label(labels: &[String], t: &[usize]) -> String {
    if labels.iter().all(|l| l.chars().count() == 1) {
        t.iter().map(|&i| labels[i].as_str()).collect()
    } else {
        t.iter().map(|&i| labels[i].as_str()).collect::<Vec<_>>().join(".")
    }
}

fn all_tuples(k: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
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

/// The 0-coskeletal simplicial set on a finite set of labels: level `n` is the
/// set of `(n + 1)`-tuples. Tuples are stored in lexicographic order.
pub fn e_space<S: AsRef<str>>(labels: &[S], d: usize) -> Result<SSet> {
    let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_string()).collect();
    let k = labels.len();
    let mut seen = std::collections::HashSet::new();
    if labels.iter().any(|l| !seen.insert(l)) {
        return Err(QcError::InvalidParameter("e_space: repeated label".into()));
    }
    let keys: Vec<Vec<Vec<usize>>> = (0..=d).map(|q| all_tuples(k, q + 1)).collect();
    let x = SSet::from_keys(
        keys,
        |t, i| {
            let mut t = t.clone();
            t.remove(i);
            t
        },
        |t, i| {
            let mut u = t.clone();
            u.insert(i, t[i]);
            u
        },
        |t| tuple_label(&labels, t),
        k <= 1,
    )?;
    x.set_coskeletal_hint(Some(0));
    Ok(x)
}

/// The map `E(S) -> E(T)` induced by a function `f: S -> T` given on indices.
/// Both ends must have been built by [`e_space`].
pub fn e_space_map(source: &Arc<SSet>, target: &Arc<SSet>, f: &[usize]) -> Result<SMap> {
    let (s, t) = (source.len(0), target.len(0));
    if f.len() != s || f.iter().any(|&v| v >= t) {
        return Err(QcError::InvalidParameter("e_space_map: function out of range".into()));
    }
    let top = source.trunc_dim().min(target.trunc_dim());
    let mut levels = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let len = source.len(n);
        let mut col = Vec::with_capacity(len);
        for x in 0..len {
            let mut digits = vec![0usize; n + 1];
            let mut r = x;
            for j in (0..=n).rev() {
                digits[j] = r % s;
                r /= s;
            }
            let y = digits.iter().fold(0usize, |acc, &v| acc * t + f[v]);
            col.push(y as Idx);
        }
        levels.push(col);
    }
    Ok(SMap::from_parts(source.clone(), target.clone(), levels))
}

/// The map `Delta^a -> Delta^n` induced by a monotone `theta: [a] -> [n]`,
/// between simplices built by [`delta_trunc`].
pub fn simplex_map(source: &Arc<SSet>, target: &Arc<SSet>, theta: &[usize]) -> Result<SMap> {
    let top = source.trunc_dim().min(target.trunc_dim());
    let n = target.len(0) - 1;
    let a = source.len(0) - 1;
    if theta.len() != a + 1 || theta.windows(2).any(|w| w[0] > w[1]) || theta.iter().any(|&v| v > n) {
        return Err(QcError::InvalidParameter("simplex_map: not a monotone map".into()));
    }
    let mut levels = Vec::with_capacity(top + 1);
    for q in 0..=top {
        let rank: HashMap<Vec<usize>, Idx> = monotone_maps(q, n)
            .into_iter()
            .enumerate()
            .map(|(i, s)| (s, i as Idx))
            .collect();
        let col = monotone_maps(q, a)
            .into_iter()
            .map(|s| rank[&s.iter().map(|&v| theta[v]).collect::<Vec<_>>()])
            .collect();
        levels.push(col);
    }
    Ok(SMap::from_parts(source.clone(), target.clone(), levels))
}

/// `Delta^n_k`: the quotient of the `n`-simplex collapsing `{0..k}` to one
/// point and `{k+1..n}` to another. Simplices are named by vertex sequences;
/// collapsed ones by a constant sequence on `0` or `k + 1`.
pub fn squashed(n: usize, k: usize, d: usize) -> Result<SSet> {
    if k >= n {
        return Err(QcError::InvalidParameter(format!("squashed({n},{k}) needs k < n")));
    }
    let norm = move |s: Vec<usize>| -> Vec<usize> {
        if s.iter().all(|&v| v <= k) {
            vec![0; s.len()]
        } else if s.iter().all(|&v| v > k) {
            vec![k + 1; s.len()]
        } else {
            s
        }
    };
    let keys: Vec<Vec<Vec<usize>>> = (0..=d)
        .map(|q| {
            let mut seen = std::collections::HashSet::new();
            monotone_maps(q, n).into_iter().map(norm).filter(|s| seen.insert(s.clone())).collect()
        })
        .collect();
    let wide = n >= 10;
    let x = SSet::from_keys(
        keys,
        |s, i| {
            let mut t = s.clone();
            t.remove(i);
            norm(t)
        },
        |s, i| {
            let mut t = s.clone();
            t.insert(i, s[i]);
            t
        },
        |s| seq_label(s, wide),
        true,
    )?;
    Ok(x)
}

/// `Delta^n x Delta^1` with `Delta^n x {0}` and `Delta^n x {1}` each collapsed
/// to a point. A simplex is written as its vertex sequence, primes marking the
/// `1` end: `"01'2'"`.
pub fn prism_quotient(n: usize, d: usize) -> Result<SSet> {
    type Key = (Vec<usize>, Vec<usize>);
    let norm = |(s, t): Key| -> Key {
        if t.iter().all(|&b| b == t[0]) {
            (vec![0; s.len()], t)
        } else {
            (s, t)
        }
    };
    let keys: Vec<Vec<Key>> = (0..=d)
        .map(|q| {
            let mut seen = std::collections::HashSet::new();
            let mut out = Vec::new();
            for t in monotone_maps(q, 1) {
                for s in monotone_maps(q, n) {
                    let k = norm((s, t.clone()));
                    if seen.insert(k.clone()) {
                        out.push(k);
                    }
                }
            }
            out
        })
        .collect();
    let wide = n >= 10;
    SSet::from_keys(
        keys,
        |(s, t), i| {
            let (mut s, mut t) = (s.clone(), t.clone());
            s.remove(i);
            t.remove(i);
            norm((s, t))
        },
        |(s, t), i| {
            let (mut s2, mut t2) = (s.clone(), t.clone());
            s2.insert(i, s[i]);
            t2.insert(i, t[i]);
            (s2, t2)
        },
        |(s, t)| prism_label(s, t, wide),
        true,
    )
}

pub(crate) fn prism_label(s: &[usize], t: &[usize], wide: bool) -> String {
    let parts: Vec<String> =
        s.iter().zip(t).map(|(&v, &b)| format!("{v}{}", if b == 1 { "'" } else { "" })).collect();
    parts.join(if wide { "." } else { "" })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::isomorphic;

    fn binom(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn delta_two_profile() {
        let d = delta(2);
        assert_eq!(d.nondegenerate_counts()[..4], [3, 3, 1, 0]);
        assert!(d.is_stable());
        d.audit().unwrap();
        // level q has C(q + 3, 2) monotone sequences
        for q in 0..=d.trunc_dim() {
            assert_eq!(d.len(q), binom(q + 3, 2));
        }
    }

    #[test]
    fn boundary_and_horn_profiles() {
        let b = boundary(3);
        assert_eq!(b.nondegenerate_counts()[..4], [4, 6, 4, 0]);
        b.audit().unwrap();
        let h = horn(2, 1).unwrap();
        assert_eq!(h.nondegenerate_counts()[..3], [3, 2, 0]);
        let h1 = horn(1, 0).unwrap();
        assert_eq!(h1.nondegenerate_counts()[..2], [1, 0]);
        assert_eq!(h1.id(0, 0), "0");
        assert!(matches!(horn(2, 3), Err(QcError::InvalidParameter(_))));
        for n in 1..5 {
            for k in 0..=n {
                let h = horn(n, k).unwrap();
                h.audit().unwrap();
                // all faces of dimension < n - 1, and n of the n + 1 facets
                let mut want: Vec<usize> = (0..n - 1).map(|q| binom(n + 1, q + 1)).collect();
                want.push(n);
                assert_eq!(&h.nondegenerate_counts()[..n], &want[..]);
            }
        }
    }

    #[test]
    fn e_space_profile() {
        let e = e_space(&["0", "1"], 8).unwrap();
        e.audit().unwrap();
        assert!(!e.is_stable());
        let nd = e.nondegenerate_counts();
        assert_eq!(nd[0], 2);
        assert!(nd[1..].iter().all(|&c| c == 2));
        assert_eq!(e.len(3), 16);
        assert_eq!(e.id(3, 5), "0101");
    }

    #[test]
    fn e_space_map_matches_labels() {
        let a = e_space(&["0", "1"], 3).unwrap().into_arc();
        let b = e_space(&["x", "y", "z"], 3).unwrap().into_arc();
        let f = e_space_map(&a, &b, &[2, 0]).unwrap();
        f.validate().unwrap();
        let x = a.find_at(2, "011").unwrap();
        assert_eq!(b.id(2, f.apply(2, x)), "zxx");
    }

    #[test]
    fn simplex_maps_are_simplicial() {
        let a = delta_trunc(1, 4).unwrap().into_arc();
        let b = delta_trunc(3, 4).unwrap().into_arc();
        let f = simplex_map(&a, &b, &[1, 3]).unwrap();
        f.validate().unwrap();
        assert_eq!(b.id(2, f.apply(2, a.find_at(2, "001").unwrap())), "113");
    }

    #[test]
    fn squashed_simplices() {
        // Delta^2 with {0,1} collapsed: edges 02 and 12 survive, one triangle
        let x = squashed(2, 1, 3).unwrap();
        x.audit().unwrap();
        assert_eq!(x.nondegenerate_counts()[..4], [2, 2, 1, 0]);
        assert_eq!(x.level(0).ids, ["0", "2"]);
        // nonempty vertex sets of Delta^4, minus those inside a block, plus the two points
        let y = squashed(4, 1, 5).unwrap();
        let total: usize = y.nondegenerate_counts().iter().sum();
        assert_eq!(total, 31 - 3 - 7 + 2);
        assert!(squashed(2, 2, 3).is_err());
    }

    #[test]
    fn prism_quotients() {
        let c0 = prism_quotient(0, 3).unwrap();
        assert!(isomorphic(&c0, &delta_trunc(1, 3).unwrap()).unwrap());
        let c2 = prism_quotient(2, 4).unwrap();
        c2.audit().unwrap();
        // the prism has 3 top simplices; collapsing the ends keeps them
        assert_eq!(c2.nondegenerate_counts()[3], 3);
        assert_eq!(c2.len(0), 2);
        assert!(c2.find_at(3, "011'2'").is_ok());
    }
}
