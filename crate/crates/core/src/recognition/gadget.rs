//! Instances built from 3-CNF formulas for the EMC, BTX and BTI
//! order-recognition problems.
//!
//! Value layout: `a_1..a_2n` are the labels `1..2n` (`a_t` stands for `X_t`,
//! `a_{t+n}` for its negation), `a_max = 2n+1`, and clause `i` (from 0) owns
//! `b, c, d = 2n+2+3i, +1, +2`. Each clause gets a block of six variables
//! whose domains are the `a` values, `a_max` and that clause's `b, c, d`.

use serde::Serialize;

use super::dimacs::Cnf;
use super::RecognitionTarget;
use crate::error::{Error, Result};
use crate::instance::{Instance, ValueUniverse};
use crate::order::TotalOrder;

/// One gadget copy: values of `y_var` against values of `z_var`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GadgetEdge {
    pub literal: i32,
    pub y_var: usize,
    pub z_var: usize,
    /// Universe indices.
    pub lo: usize,
    pub hi: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GadgetMeta {
    pub n: usize,
    pub m: usize,
    /// Universe index of `a_t` at position `t - 1`.
    pub a: Vec<usize>,
    pub a_max: usize,
    /// Universe indices of each clause's `b, c, d`; the three disjunct
    /// conditions `b > c`, `c > d`, `d > b` cannot hold together.
    pub clause_values: Vec<[usize; 3]>,
    /// Per clause, the `(lo, hi)` pair each literal's gadget makes relevant.
    pub disjuncts: Vec<[(i32, usize, usize); 3]>,
    pub edges: Vec<GadgetEdge>,
}

#[derive(Debug, Clone)]
pub struct Gadget {
    pub target: RecognitionTarget,
    pub instance: Instance,
    /// Fixed variable order (EMC only).
    pub var_order: Option<TotalOrder>,
    pub meta: GadgetMeta,
}

fn literal_values(meta: &GadgetMeta, literal: i32) -> (usize, usize) {
    let t = literal.unsigned_abs() as usize;
    let (pos, neg) = (meta.a[t - 1], meta.a[t - 1 + meta.n]);
    if literal > 0 {
        (pos, neg)
    } else {
        (neg, pos)
    }
}

pub fn gen_gadget(target: RecognitionTarget, cnf: &Cnf) -> Result<Gadget> {
    if target == RecognitionTarget::Btp {
        return Err(Error::UnknownName("no gadget for BTP".into()));
    }
    for c in &cnf.clauses {
        if c.len() != 3 {
            return Err(Error::InvalidFormula(format!("clause {c:?} does not have three literals")));
        }
        let mut vars: Vec<u32> = c.iter().map(|l| l.unsigned_abs()).collect();
        vars.sort_unstable();
        vars.dedup();
        if vars.len() != 3 {
            return Err(Error::InvalidFormula(format!("clause {c:?} repeats a variable")));
        }
    }
    let n = cnf.num_vars;
    let m = cnf.clauses.len();
    let labels: Vec<i64> = (1..=(2 * n + 1 + 3 * m) as i64).collect();
    let universe = ValueUniverse::new(labels)?;
    let idx = |label: usize| label - 1;
    let mut meta = GadgetMeta {
        n,
        m,
        a: (1..=2 * n).map(idx).collect(),
        a_max: idx(2 * n + 1),
        clause_values: (0..m)
            .map(|i| {
                let b = 2 * n + 2 + 3 * i;
                [idx(b), idx(b + 1), idx(b + 2)]
            })
            .collect(),
        disjuncts: Vec::new(),
        edges: Vec::new(),
    };
    let num_vars = 6 * m;
    let names: Vec<String> = (1..=num_vars).map(|v| format!("x{v}")).collect();
    let domains: Vec<Vec<i64>> = (0..num_vars)
        .map(|v| {
            let mut d: Vec<i64> = (1..=(2 * n + 1) as i64).collect();
            let b = (2 * n + 2 + 3 * (v / 6)) as i64;
            d.extend([b, b + 1, b + 2]);
            d
        })
        .collect();
    let mut inst = Instance::new(universe, names, domains)?;
    let a_max = meta.a_max;

    let equality_pairs: Vec<(usize, usize)> = match target {
        RecognitionTarget::Emc => (0..num_vars.saturating_sub(1)).map(|v| (v, v + 1)).collect(),
        _ => (0..m).flat_map(|i| [0, 2, 4].map(|o| (6 * i + o, 6 * i + o + 1))).collect(),
    };
    for (u, w) in equality_pairs {
        let allowed: Vec<(usize, usize)> = inst
            .domain(u)
            .iter()
            .flat_map(|&a| inst.domain(w).iter().map(move |&b| (a, b)))
            .filter(|&(a, b)| a == b || a == a_max || b == a_max)
            .collect();
        inst.add_constraint(u, w, allowed)?;
    }

    for (i, clause) in cnf.clauses.iter().enumerate() {
        let base = 6 * i;
        let (p, q, r) = (base, base + 2, base + 4);
        let [b, c, d] = meta.clause_values[i];
        let (pairs, lohi): ([(usize, usize); 3], [(usize, usize); 3]) = match target {
            RecognitionTarget::Emc => ([(p, q), (p, r), (q, r)], [(b, c), (c, d), (d, b)]),
            _ => ([(p, q), (q, r), (r, p)], [(b, c); 3]),
        };
        let mut ds = [(0, 0, 0); 3];
        for k in 0..3 {
            let (u, w) = pairs[k];
            let (lo, hi) = lohi[k];
            ds[k] = (clause[k], lo, hi);
            let copies: Vec<(usize, usize)> = match target {
                RecognitionTarget::Btx => vec![(u, w), (u + 1, w), (w + 1, u)],
                _ => vec![(u, w)],
            };
            for (y, z) in copies {
                meta.edges.push(GadgetEdge {
                    literal: clause[k],
                    y_var: y,
                    z_var: z,
                    lo,
                    hi,
                });
            }
        }
        meta.disjuncts.push(ds);
    }
    for e in &meta.edges {
        let (good, bad) = literal_values(&meta, e.literal);
        let positive = [(good, e.lo), (good, e.hi), (bad, e.lo)];
        let allowed: Vec<(usize, usize)> = inst
            .domain(e.y_var)
            .iter()
            .flat_map(|&a| inst.domain(e.z_var).iter().map(move |&b| (a, b)))
            .filter(|&(a, b)| a == a_max || b == a_max || positive.contains(&(a, b)))
            .collect();
        inst.add_constraint(e.y_var, e.z_var, allowed)?;
    }
    let var_order = (target == RecognitionTarget::Emc).then(|| TotalOrder::identity(num_vars));
    Ok(Gadget {
        target,
        instance: inst,
        var_order,
        meta,
    })
}

/// The domain order induced by a truth assignment (`assignment[t - 1]` is
/// `X_t`): `a_t > a_{t+n}` exactly when `X_t` is true, then for each clause
/// an order of `b, c, d` meeting the demand of every false literal, with
/// `a_max` above everything.
pub fn assignment_to_order(cnf: &Cnf, assignment: &[bool], meta: &GadgetMeta) -> Result<TotalOrder> {
    if assignment.len() != meta.n || cnf.clauses.len() != meta.m {
        return Err(Error::InvalidFormula("assignment or formula does not match the gadget".into()));
    }
    let mut seq = Vec::with_capacity(2 * meta.n + 1 + 3 * meta.m);
    for t in 0..meta.n {
        let (pos, neg) = (meta.a[t], meta.a[t + meta.n]);
        if assignment[t] {
            seq.extend([neg, pos]);
        } else {
            seq.extend([pos, neg]);
        }
    }
    for (i, clause) in cnf.clauses.iter().enumerate() {
        let values = meta.clause_values[i];
        let demands: Vec<(usize, usize)> = meta.disjuncts[i]
            .iter()
            .zip(clause)
            .filter(|(_, &l)| assignment[l.unsigned_abs() as usize - 1] != (l > 0))
            .map(|(&(_, lo, hi), _)| (lo, hi))
            .collect();
        let fits = |perm: &[usize]| {
            let pos = |v: usize| perm.iter().position(|&x| x == v).expect("clause value");
            demands.iter().all(|&(lo, hi)| pos(lo) > pos(hi))
        };
        let chosen = crate::order::permutations(3)
            .into_iter()
            .map(|p| p.iter().map(|&k| values[k]).collect::<Vec<_>>())
            .find(|p| fits(p))
            .unwrap_or_else(|| values.to_vec());
        seq.extend(chosen);
    }
    seq.push(meta.a_max);
    TotalOrder::from_sequence(seq)
}
