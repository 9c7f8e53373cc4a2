//! Finding orders under which a pattern does not occur.
//!
//! With the domain order fixed, every occurrence of a target's order-free part
//! on a variable triple forbids some relative placement of those variables.
//! Collecting these demands gives an ordering problem whose constraints are
//! all min-closed (BTI, BTX, EMC) or all max-closed (BTP), so generalised arc
//! consistency followed by the extremal assignment solves it. With the
//! variable order fixed, each occurrence of BTI or BTX without its domain
//! order yields a single precedence between two values, and an order exists
//! exactly when those precedences are acyclic.

pub mod dimacs;
pub mod gadget;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::occurrence::{find_homomorphism_with, for_each_homomorphism, occurs_in_instance, InstanceView};
use crate::order::{permutations, TotalOrder};
use crate::pattern::{Pattern, PatternName};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RecognitionTarget {
    Btp,
    Bti,
    Btx,
    Emc,
}

impl RecognitionTarget {
    pub const ALL: [RecognitionTarget; 4] = [
        RecognitionTarget::Btp,
        RecognitionTarget::Bti,
        RecognitionTarget::Btx,
        RecognitionTarget::Emc,
    ];

    pub fn pattern_name(self) -> PatternName {
        match self {
            RecognitionTarget::Btp => PatternName::Btp,
            RecognitionTarget::Bti => PatternName::Bti,
            RecognitionTarget::Btx => PatternName::Btx,
            RecognitionTarget::Emc => PatternName::Emc,
        }
    }

    pub fn pattern(self) -> Pattern {
        Pattern::builtin(self.pattern_name())
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RecognitionTarget::Btp => "btp",
            RecognitionTarget::Bti => "bti",
            RecognitionTarget::Btx => "btx",
            RecognitionTarget::Emc => "emc",
        }
    }
}

impl fmt::Display for RecognitionTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RecognitionTarget {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        RecognitionTarget::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

/// A constraint on the positions `O_i` of variables in the sought order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum OrderingConstraint {
    /// `O_pos > min(O_a, O_b)`.
    Min { pos: usize, a: usize, b: usize },
    /// `O_pos < max(O_a, O_b)`.
    Max { pos: usize, a: usize, b: usize },
    /// `O_later > O_earlier`.
    Precedence { later: usize, earlier: usize },
}

impl OrderingConstraint {
    pub fn min(pos: usize, a: usize, b: usize) -> Self {
        OrderingConstraint::Min { pos, a: a.min(b), b: a.max(b) }
    }

    pub fn max(pos: usize, a: usize, b: usize) -> Self {
        OrderingConstraint::Max { pos, a: a.min(b), b: a.max(b) }
    }

    pub fn scope(&self) -> Vec<usize> {
        match *self {
            OrderingConstraint::Min { pos, a, b } | OrderingConstraint::Max { pos, a, b } => vec![pos, a, b],
            OrderingConstraint::Precedence { later, earlier } => vec![later, earlier],
        }
    }

    /// Whether the positions satisfy the constraint (positions may repeat).
    pub fn holds(&self, o: &[usize]) -> bool {
        match *self {
            OrderingConstraint::Min { pos, a, b } => o[pos] > o[a].min(o[b]),
            OrderingConstraint::Max { pos, a, b } => o[pos] < o[a].max(o[b]),
            OrderingConstraint::Precedence { later, earlier } => o[later] > o[earlier],
        }
    }

    /// Tuple-level check over the scope values, in [`OrderingConstraint::scope`] order.
    pub fn holds_on_scope(&self, vals: &[usize]) -> bool {
        match self {
            OrderingConstraint::Min { .. } => vals[0] > vals[1].min(vals[2]),
            OrderingConstraint::Max { .. } => vals[0] < vals[1].max(vals[2]),
            OrderingConstraint::Precedence { .. } => vals[0] > vals[1],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Closure {
    Min,
    Max,
}

/// Position variables `O_0..O_{n-1}` over `0..n` and constraints on them.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct OrderingProblem {
    pub n: usize,
    pub constraints: BTreeSet<OrderingConstraint>,
}

impl OrderingProblem {
    pub fn new(n: usize) -> Self {
        OrderingProblem {
            n,
            constraints: BTreeSet::new(),
        }
    }

    /// The closure family; precedence-only problems count as min-closed.
    pub fn closure(&self) -> Result<Closure> {
        let has_min = self.constraints.iter().any(|c| matches!(c, OrderingConstraint::Min { .. }));
        let has_max = self.constraints.iter().any(|c| matches!(c, OrderingConstraint::Max { .. }));
        match (has_min, has_max) {
            (true, true) => Err(Error::MixedClosure),
            (false, true) => Ok(Closure::Max),
            _ => Ok(Closure::Min),
        }
    }

    /// Whether the order (as variable ranks) satisfies every constraint.
    pub fn satisfied_by(&self, order: &TotalOrder) -> bool {
        self.constraints.iter().all(|c| c.holds(order.ranks()))
    }
}

/// For every injective placement of the target's variables, checks whether
/// its order-free part occurs there under `dom_order`, and records the
/// demand that breaks that occurrence.
pub fn collect_var_order_witnesses(inst: &Instance, target: RecognitionTarget, dom_order: &TotalOrder) -> Result<OrderingProblem> {
    let full = target.pattern();
    let stripped = full.without_var_order();
    let n = inst.num_vars();
    let identity = TotalOrder::identity(n);
    let view = InstanceView::new(inst, &identity, dom_order)?;
    let role = |name: &str| full.var_index(name).expect("role variable");
    let (x, y, z) = (role("x"), role("y"), role("z"));
    let mut maps = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i != j && j != k && i != k {
                    let mut m = vec![0; 3];
                    m[x] = i;
                    m[y] = j;
                    m[z] = k;
                    maps.push(m);
                }
            }
        }
    }
    let found: Vec<OrderingConstraint> = maps
        .par_iter()
        .filter(|m| find_homomorphism_with(&stripped, &view, Some(m)).is_some())
        .map(|m| match target {
            RecognitionTarget::Btx => OrderingConstraint::min(m[y], m[x], m[z]),
            RecognitionTarget::Btp => OrderingConstraint::max(m[z], m[x], m[y]),
            RecognitionTarget::Bti => OrderingConstraint::Precedence {
                later: m[x],
                earlier: m[z],
            },
            RecognitionTarget::Emc => OrderingConstraint::Precedence {
                later: m[y],
                earlier: m[z],
            },
        })
        .collect();
    Ok(OrderingProblem {
        n,
        constraints: found.into_iter().collect(),
    })
}

fn supported(c: &OrderingConstraint, var: usize, v: usize, doms: &[Vec<bool>]) -> bool {
    let lo = |d: &Vec<bool>| d.iter().position(|&b| b);
    let hi = |d: &Vec<bool>| d.iter().rposition(|&b| b);
    match *c {
        OrderingConstraint::Min { pos, a, b } => {
            // O_pos > min(O_a, O_b)
            if var == pos {
                match (lo(&doms[a]), lo(&doms[b])) {
                    (Some(x), Some(y)) => v > x.min(y),
                    _ => false,
                }
            } else {
                let other = if var == a { b } else { a };
                match (hi(&doms[pos]), lo(&doms[other])) {
                    (Some(p), Some(o)) => p > v.min(o),
                    _ => false,
                }
            }
        }
        OrderingConstraint::Max { pos, a, b } => {
            // O_pos < max(O_a, O_b)
            if var == pos {
                match (hi(&doms[a]), hi(&doms[b])) {
                    (Some(x), Some(y)) => v < x.max(y),
                    _ => false,
                }
            } else {
                let other = if var == a { b } else { a };
                match (lo(&doms[pos]), hi(&doms[other])) {
                    (Some(p), Some(o)) => p < v.max(o),
                    _ => false,
                }
            }
        }
        OrderingConstraint::Precedence { later, earlier } => {
            if var == later {
                lo(&doms[earlier]).is_some_and(|e| v > e)
            } else {
                hi(&doms[later]).is_some_and(|l| l > v)
            }
        }
    }
}

/// Generalised arc consistency over positions `0..n`. Returns `None` on wipeout.
pub fn gac(op: &OrderingProblem) -> Option<Vec<Vec<bool>>> {
    let n = op.n;
    let mut doms = vec![vec![true; n]; n];
    let mut changed = true;
    while changed {
        changed = false;
        for c in &op.constraints {
            let mut scope = c.scope();
            scope.dedup();
            for &var in &scope {
                for v in 0..n {
                    if doms[var][v] && !supported(c, var, v, &doms) {
                        doms[var][v] = false;
                        changed = true;
                    }
                }
                if !doms[var].iter().any(|&b| b) {
                    return None;
                }
            }
        }
    }
    Some(doms)
}

/// Solves an ordering problem of one closure family: after GAC each position
/// takes its smallest surviving value (largest for max-closed problems), and
/// variables sharing a value are ordered by index.
pub fn solve_ordering(op: &OrderingProblem) -> Result<Option<TotalOrder>> {
    let closure = op.closure()?;
    if op.n == 0 {
        return Ok(Some(TotalOrder::identity(0)));
    }
    let Some(doms) = gac(op) else {
        return Ok(None);
    };
    let vals: Vec<usize> = doms
        .iter()
        .map(|d| match closure {
            Closure::Min => d.iter().position(|&b| b).expect("non-empty"),
            Closure::Max => d.iter().rposition(|&b| b).expect("non-empty"),
        })
        .collect();
    if !op.constraints.iter().all(|c| c.holds(&vals)) {
        return Err(Error::Internal("extremal assignment violates the ordering problem".into()));
    }
    let mut seq: Vec<usize> = (0..op.n).collect();
    seq.sort_by_key(|&v| (vals[v], v));
    let order = TotalOrder::from_sequence(seq)?;
    debug_assert!(op.satisfied_by(&order));
    Ok(Some(order))
}

/// A variable order under which `target` does not occur with the given
/// domain order, or `None` if no such order exists.
pub fn find_var_order(inst: &Instance, target: RecognitionTarget, dom_order: &TotalOrder) -> Result<Option<TotalOrder>> {
    let op = collect_var_order_witnesses(inst, target, dom_order)?;
    let Some(order) = solve_ordering(&op)? else {
        return Ok(None);
    };
    if occurs_in_instance(&target.pattern(), inst, &order, dom_order)? {
        return Err(Error::Internal(format!("{target} still occurs under the computed order")));
    }
    Ok(Some(order))
}

/// Arcs `u -> v` over `0..nodes` meaning `u` must precede `v`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct PrecedenceGraph {
    pub nodes: usize,
    pub arcs: BTreeSet<(usize, usize)>,
}

impl PrecedenceGraph {
    /// Topological order taking the smallest available node first, or `None`
    /// if the arcs contain a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut indeg = vec![0usize; self.nodes];
        let mut out = vec![Vec::new(); self.nodes];
        for &(u, v) in &self.arcs {
            indeg[v] += 1;
            out[u].push(v);
        }
        let mut ready: BTreeSet<usize> = (0..self.nodes).filter(|&v| indeg[v] == 0).collect();
        let mut seq = Vec::with_capacity(self.nodes);
        while let Some(u) = ready.pop_first() {
            seq.push(u);
            for &v in &out[u] {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    ready.insert(v);
                }
            }
        }
        (seq.len() == self.nodes).then_some(seq)
    }
}

/// Value precedences forced by occurrences of `target` (BTI or BTX) without
/// its domain order, under the fixed variable order. Each occurrence maps the
/// ordered pair `alpha > beta` onto two values; placing `alpha`'s image first
/// breaks it.
pub fn dom_order_precedences(inst: &Instance, target: RecognitionTarget, var_order: &TotalOrder) -> Result<PrecedenceGraph> {
    if !matches!(target, RecognitionTarget::Bti | RecognitionTarget::Btx) {
        return Err(Error::UnknownName(format!("{target} has no domain-order search")));
    }
    let full = target.pattern();
    let stripped = full.without_dom_order();
    let alpha = full.point_index("y", "alpha")?;
    let beta = full.point_index("y", "beta")?;
    let identity = TotalOrder::identity(inst.universe().len());
    let view = InstanceView::new(inst, var_order, &identity)?;
    let mut arcs = BTreeSet::new();
    for_each_homomorphism(&stripped, &view, None, &mut |h| {
        let (_, a) = view.point(h.points[alpha]);
        let (_, b) = view.point(h.points[beta]);
        arcs.insert((a, b));
        true
    });
    Ok(PrecedenceGraph {
        nodes: inst.universe().len(),
        arcs,
    })
}

/// A domain order under which `target` (BTI or BTX) does not occur with the
/// given variable order, or `None` if none exists.
pub fn find_dom_order(inst: &Instance, target: RecognitionTarget, var_order: &TotalOrder) -> Result<Option<TotalOrder>> {
    let graph = dom_order_precedences(inst, target, var_order)?;
    let Some(seq) = graph.topological_order() else {
        return Ok(None);
    };
    let order = TotalOrder::from_sequence(seq)?;
    if occurs_in_instance(&target.pattern(), inst, var_order, &order)? {
        return Err(Error::Internal(format!("{target} still occurs under the computed domain order")));
    }
    Ok(Some(order))
}

/// First variable order, in lexicographic enumeration, avoiding the target.
pub fn exhaustive_var_order(inst: &Instance, target: RecognitionTarget, dom_order: &TotalOrder) -> Result<Option<TotalOrder>> {
    let p = target.pattern();
    for perm in permutations(inst.num_vars()) {
        let o = TotalOrder::from_sequence(perm)?;
        if !occurs_in_instance(&p, inst, &o, dom_order)? {
            return Ok(Some(o));
        }
    }
    Ok(None)
}

/// First domain order, in lexicographic enumeration, avoiding the target.
pub fn exhaustive_dom_order(inst: &Instance, target: RecognitionTarget, var_order: &TotalOrder) -> Result<Option<TotalOrder>> {
    let p = target.pattern();
    for perm in permutations(inst.universe().len()) {
        let o = TotalOrder::from_sequence(perm)?;
        if !occurs_in_instance(&p, inst, var_order, &o)? {
            return Ok(Some(o));
        }
    }
    Ok(None)
}
