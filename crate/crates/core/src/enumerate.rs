//! Exhaustive generation of small simple patterns up to isomorphism.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::pattern::{Pattern, Point};

const VAR_NAMES: [&str; 6] = ["x", "y", "z", "u", "v", "w"];
const POINT_NAMES: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

/// Point layout: `sizes[v]` points on variable `v`, numbered in variable order.
fn points_for(sizes: &[usize]) -> (Vec<String>, Vec<Point>) {
    let vars = (0..sizes.len()).map(|v| VAR_NAMES[v].to_string()).collect();
    let points = sizes
        .iter()
        .enumerate()
        .flat_map(|(v, &k)| (0..k).map(move |i| Point { var: v, name: POINT_NAMES[i].to_string() }))
        .collect();
    (vars, points)
}

/// Non-increasing size vectors of length `nv` with entries in `1..=max`.
fn size_vectors(nv: usize, max: usize) -> Vec<Vec<usize>> {
    if nv == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in size_vectors(nv - 1, max) {
        let top = rest.last().copied().unwrap_or(max);
        for k in 1..=top {
            let mut v = rest.clone();
            v.push(k);
            out.push(v);
        }
    }
    out
}

/// Strict partial orders on `n` elements, as sets of pairs `(a, b)` with `a < b`.
pub fn strict_partial_orders(n: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))).collect();
    (0u64..1 << pairs.len())
        .filter_map(|mask| {
            let rel: BTreeSet<(usize, usize)> =
                pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect();
            let antisymmetric = rel.iter().all(|&(a, b)| !rel.contains(&(b, a)));
            let transitive = rel
                .iter()
                .all(|&(a, b)| rel.iter().filter(|&&(c, _)| c == b).all(|&(_, d)| rel.contains(&(a, d))));
            (antisymmetric && transitive).then(|| rel.into_iter().collect())
        })
        .collect()
}

/// Unordered patterns without mergeable points, one per isomorphism class.
/// At most `max_neg` negative edges, no two on the same variable pair.
fn bases(max_vars: usize, max_pts: usize, max_neg: usize) -> Vec<Pattern> {
    let mut found: BTreeMap<Vec<u32>, Pattern> = BTreeMap::new();
    for nv in 1..=max_vars {
        for sizes in size_vectors(nv, max_pts) {
            let (vars, points) = points_for(&sizes);
            let np = points.len();
            let cross: Vec<(usize, usize)> = (0..np)
                .flat_map(|p| (p + 1..np).map(move |q| (p, q)))
                .filter(|&(p, q)| points[p].var != points[q].var)
                .collect();
            let mut labels = vec![0u8; cross.len()];
            loop {
                let negs: Vec<(usize, usize)> = cross
                    .iter()
                    .zip(&labels)
                    .filter(|(_, &l)| l == 2)
                    .map(|(&(p, q), _)| (points[p].var, points[q].var))
                    .collect();
                let distinct_pairs: BTreeSet<_> = negs.iter().collect();
                if negs.len() <= max_neg && distinct_pairs.len() == negs.len() {
                    let cpt = cross.iter().zip(&labels).filter(|(_, &l)| l > 0).map(|(&(p, q), &l)| (p, q, l == 1));
                    let p = Pattern::new(vars.clone(), points.clone(), cpt, [], [], []).expect("valid layout");
                    if p.mergeable_pairs().is_empty() {
                        found.entry(p.canonical_form()).or_insert(p);
                    }
                }
                // odometer over {none, positive, negative}
                let mut i = 0;
                while i < labels.len() {
                    labels[i] += 1;
                    if labels[i] < 3 {
                        break;
                    }
                    labels[i] = 0;
                    i += 1;
                }
                if i == labels.len() {
                    break;
                }
            }
        }
    }
    found.into_values().collect()
}

/// All simple patterns with at most `max_vars` variables, `max_pts` points
/// per variable and `max_neg` negative edges (never two on one variable
/// pair), with any partial variable order and any domain orders, one per
/// isomorphism class, sorted by canonical form.
pub fn enumerate_simple_patterns(max_vars: usize, max_pts: usize, max_neg: usize) -> Vec<Pattern> {
    assert!(max_vars <= VAR_NAMES.len() && max_pts <= POINT_NAMES.len(), "bounds too large");
    let found: BTreeMap<Vec<u32>, Pattern> = bases(max_vars, max_pts, max_neg)
        .par_iter()
        .map(|base| {
            let mut local = BTreeMap::new();
            let nv = base.num_vars();
            let dom_choices: Vec<Vec<Vec<(usize, usize)>>> = (0..nv)
                .map(|v| strict_partial_orders(base.points_of(v).len())
                    .into_iter()
                    .map(|rel| rel.into_iter().map(|(i, j)| (base.points_of(v)[i], base.points_of(v)[j])).collect())
                    .collect())
                .collect();
            let cpt: Vec<(usize, usize, bool)> = base.cpt_entries().collect();
            for vo in strict_partial_orders(nv) {
                let mut choice = vec![0usize; nv];
                loop {
                    let dord: Vec<(usize, usize)> =
                        (0..nv).flat_map(|v| dom_choices[v][choice[v]].iter().copied()).collect();
                    let p = Pattern::new(
                        base.variables().to_vec(),
                        base.points().to_vec(),
                        cpt.iter().copied(),
                        vo.iter().copied(),
                        dord,
                        [],
                    )
                    .expect("orders are acyclic");
                    if p.is_simple() {
                        local.entry(p.canonical_form()).or_insert(p);
                    }
                    let mut k = 0;
                    while k < nv {
                        choice[k] += 1;
                        if choice[k] < dom_choices[k].len() {
                            break;
                        }
                        choice[k] = 0;
                        k += 1;
                    }
                    if k == nv {
                        break;
                    }
                }
            }
            local
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                a.entry(k).or_insert(v);
            }
            a
        });
    found.into_values().collect()
}
