//! Pattern occurrence.
//!
//! A homomorphism maps source points to target points so that defined
//! compatibilities are preserved, distinct source variables land on distinct
//! target variables, both strict orders are preserved and disequal points stay
//! apart. A pattern occurs in another when every consistent linear extension
//! of the target admits such a map; an instance with total orders is its own
//! unique extension.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::order::{linear_extensions, permutations, TotalOrder};
use crate::pattern::{Pattern, Point};

/// A totally ordered structure that patterns can be mapped into.
pub trait Target {
    fn num_vars(&self) -> usize;
    fn num_points(&self) -> usize;
    fn point_var(&self, t: usize) -> usize;
    fn points_of_var(&self, v: usize) -> &[usize];
    /// Position of `v` in the total variable order.
    fn var_rank(&self, v: usize) -> usize;
    /// Position of a point in the total order on its variable's points.
    fn point_rank(&self, t: usize) -> usize;
    fn cpt(&self, s: usize, t: usize) -> Option<bool>;
    fn point_label(&self, t: usize) -> String;
}

/// A pattern with both orders total, obtained by merging points and then
/// completing the orders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearExtension {
    /// Source point to point of [`LinearExtension::pattern`].
    pub merge: Vec<usize>,
    pattern: Pattern,
    var_rank: Vec<usize>,
    point_rank: Vec<usize>,
}

impl LinearExtension {
    pub fn pattern(&self) -> &Pattern {
        &self.pattern
    }

    pub fn to_json_value(&self) -> Value {
        let p = &self.pattern;
        let mut vars: Vec<usize> = (0..p.num_vars()).collect();
        vars.sort_by_key(|&v| self.var_rank[v]);
        let dom: Vec<Value> = (0..p.num_vars())
            .map(|v| {
                let mut pts = p.points_of(v).to_vec();
                pts.sort_by_key(|&t| self.point_rank[t]);
                json!(pts.iter().map(|&t| p.point_label(t)).collect::<Vec<_>>())
            })
            .collect();
        json!({
            "pattern": p.to_json_value(),
            "varOrder": vars.iter().map(|&v| p.variables()[v].clone()).collect::<Vec<_>>(),
            "domOrder": dom,
        })
    }
}

impl Target for LinearExtension {
    fn num_vars(&self) -> usize {
        self.pattern.num_vars()
    }
    fn num_points(&self) -> usize {
        self.pattern.num_points()
    }
    fn point_var(&self, t: usize) -> usize {
        self.pattern.point_var(t)
    }
    fn points_of_var(&self, v: usize) -> &[usize] {
        self.pattern.points_of(v)
    }
    fn var_rank(&self, v: usize) -> usize {
        self.var_rank[v]
    }
    fn point_rank(&self, t: usize) -> usize {
        self.point_rank[t]
    }
    fn cpt(&self, s: usize, t: usize) -> Option<bool> {
        self.pattern.cpt(s, t)
    }
    fn point_label(&self, t: usize) -> String {
        self.pattern.point_label(t)
    }
}

/// An instance seen as a pattern with total compatibility and the given
/// variable and value orders. Points are the current domain values.
pub struct InstanceView<'a> {
    inst: &'a Instance,
    var_rank: Vec<usize>,
    value_rank: Vec<usize>,
    points: Vec<(usize, usize)>,
    by_var: Vec<Vec<usize>>,
}

impl<'a> InstanceView<'a> {
    /// `var_order` ranks variables, `dom_order` ranks universe indices.
    pub fn new(inst: &'a Instance, var_order: &TotalOrder, dom_order: &TotalOrder) -> Result<Self> {
        if var_order.len() != inst.num_vars() {
            return Err(Error::InvalidOrder(format!(
                "variable order has {} entries for {} variables",
                var_order.len(),
                inst.num_vars()
            )));
        }
        if dom_order.len() != inst.universe().len() {
            return Err(Error::InvalidOrder(format!(
                "domain order has {} entries for {} values",
                dom_order.len(),
                inst.universe().len()
            )));
        }
        let mut points = Vec::with_capacity(inst.num_points());
        let mut by_var = Vec::with_capacity(inst.num_vars());
        for v in 0..inst.num_vars() {
            let mut ids = Vec::new();
            for &a in inst.domain(v) {
                ids.push(points.len());
                points.push((v, a));
            }
            by_var.push(ids);
        }
        Ok(InstanceView {
            inst,
            var_rank: var_order.ranks().to_vec(),
            value_rank: dom_order.ranks().to_vec(),
            points,
            by_var,
        })
    }

    /// Variable and universe index of a point.
    pub fn point(&self, t: usize) -> (usize, usize) {
        self.points[t]
    }
}

impl Target for InstanceView<'_> {
    fn num_vars(&self) -> usize {
        self.inst.num_vars()
    }
    fn num_points(&self) -> usize {
        self.points.len()
    }
    fn point_var(&self, t: usize) -> usize {
        self.points[t].0
    }
    fn points_of_var(&self, v: usize) -> &[usize] {
        &self.by_var[v]
    }
    fn var_rank(&self, v: usize) -> usize {
        self.var_rank[v]
    }
    fn point_rank(&self, t: usize) -> usize {
        self.value_rank[self.points[t].1]
    }
    fn cpt(&self, s: usize, t: usize) -> Option<bool> {
        let (x, a) = self.points[s];
        let (y, b) = self.points[t];
        (x != y).then(|| self.inst.compatible(x, a, y, b))
    }
    fn point_label(&self, t: usize) -> String {
        let (x, a) = self.points[t];
        format!("{}={}", self.inst.variable_name(x), self.inst.universe().label(a))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Homomorphism {
    /// Source point to target point.
    pub points: Vec<usize>,
    /// Source variable to target variable.
    pub vars: Vec<usize>,
}

impl Homomorphism {
    /// Re-checks every clause of the definition from scratch.
    pub fn verify(&self, src: &Pattern, tgt: &dyn Target) -> bool {
        if self.points.len() != src.num_points() || self.vars.len() != src.num_vars() {
            return false;
        }
        if self.points.iter().any(|&t| t >= tgt.num_points()) || self.vars.iter().any(|&v| v >= tgt.num_vars()) {
            return false;
        }
        for (p, &t) in self.points.iter().enumerate() {
            if tgt.point_var(t) != self.vars[src.point_var(p)] {
                return false;
            }
        }
        for a in 0..src.num_vars() {
            for b in 0..src.num_vars() {
                if a != b && self.vars[a] == self.vars[b] {
                    return false;
                }
                if src.var_less(a, b) && tgt.var_rank(self.vars[a]) >= tgt.var_rank(self.vars[b]) {
                    return false;
                }
            }
        }
        for (p, q, v) in src.cpt_entries() {
            if tgt.cpt(self.points[p], self.points[q]) != Some(v) {
                return false;
            }
        }
        for p in 0..src.num_points() {
            for q in 0..src.num_points() {
                if src.dom_less(p, q) && tgt.point_rank(self.points[p]) >= tgt.point_rank(self.points[q]) {
                    return false;
                }
            }
        }
        src.diseq().iter().all(|&(p, q)| self.points[p] != self.points[q])
    }

    pub fn to_json_value(&self, src: &Pattern, tgt: &dyn Target) -> Value {
        let map: serde_json::Map<String, Value> = self
            .points
            .iter()
            .enumerate()
            .map(|(p, &t)| (src.point_label(p), Value::String(tgt.point_label(t))))
            .collect();
        Value::Object(map)
    }
}

enum Step {
    Point(usize),
    /// A variable without points still needs an injective, order-preserving image.
    Var(usize),
}

struct Search<'a> {
    src: &'a Pattern,
    tgt: &'a dyn Target,
    steps: Vec<Step>,
    /// For each source point, earlier points it has a constraint with.
    checks: Vec<Vec<usize>>,
    fixed: Option<&'a [usize]>,
    points: Vec<usize>,
    vars: Vec<Option<usize>>,
    used: Vec<bool>,
}

const UNSET: usize = usize::MAX;

impl<'a> Search<'a> {
    fn new(src: &'a Pattern, tgt: &'a dyn Target, fixed: Option<&'a [usize]>) -> Self {
        let np = src.num_points();
        let related = |p: usize, q: usize| {
            src.cpt(p, q).is_some() || (src.point_var(p) == src.point_var(q) && src.distinct(p, q))
        };
        // Greedy most-constrained-first: next point has most constraints to the chosen prefix.
        let mut chosen: Vec<usize> = Vec::with_capacity(np);
        let mut placed = vec![false; np];
        let degree: Vec<usize> = (0..np).map(|p| (0..np).filter(|&q| q != p && related(p, q)).count()).collect();
        while chosen.len() < np {
            let best = (0..np)
                .filter(|&p| !placed[p])
                .max_by_key(|&p| {
                    let links = chosen.iter().filter(|&&q| related(p, q)).count();
                    let same_var = chosen.iter().any(|&q| src.point_var(q) == src.point_var(p));
                    (links, same_var, degree[p], std::cmp::Reverse(p))
                })
                .expect("unplaced point");
            placed[best] = true;
            chosen.push(best);
        }
        let mut checks = vec![Vec::new(); np];
        for (i, &p) in chosen.iter().enumerate() {
            checks[p] = chosen[..i]
                .iter()
                .copied()
                .filter(|&q| related(p, q) || (src.point_var(p) == src.point_var(q) && src.dom_comparable(p, q)))
                .collect();
        }
        let mut steps: Vec<Step> = chosen.into_iter().map(Step::Point).collect();
        steps.extend((0..src.num_vars()).filter(|&v| src.points_of(v).is_empty()).map(Step::Var));
        Search {
            src,
            tgt,
            steps,
            checks,
            fixed,
            points: vec![UNSET; np],
            vars: vec![None; src.num_vars()],
            used: vec![false; tgt.num_vars()],
        }
    }

    fn var_ok(&self, x: usize, tv: usize) -> bool {
        if self.used[tv] {
            return false;
        }
        if let Some(f) = self.fixed {
            if f[x] != tv {
                return false;
            }
        }
        let r = self.tgt.var_rank(tv);
        (0..self.src.num_vars()).all(|y| match self.vars[y] {
            Some(ty) => {
                (!self.src.var_less(x, y) || r < self.tgt.var_rank(ty))
                    && (!self.src.var_less(y, x) || self.tgt.var_rank(ty) < r)
            }
            None => true,
        })
    }

    fn point_ok(&self, p: usize, t: usize) -> bool {
        let src = self.src;
        self.checks[p].iter().all(|&q| {
            let u = self.points[q];
            if let Some(v) = src.cpt(p, q) {
                if self.tgt.cpt(t, u) != Some(v) {
                    return false;
                }
            }
            if src.point_var(p) == src.point_var(q) {
                if src.distinct(p, q) && t == u {
                    return false;
                }
                let (rt, ru) = (self.tgt.point_rank(t), self.tgt.point_rank(u));
                if src.dom_less(p, q) && rt >= ru {
                    return false;
                }
                if src.dom_less(q, p) && ru >= rt {
                    return false;
                }
            }
            true
        })
    }

    fn current(&self) -> Homomorphism {
        Homomorphism {
            points: self.points.clone(),
            vars: self.vars.iter().map(|v| v.expect("all variables mapped")).collect(),
        }
    }

    /// Returns true when the visitor asked to stop.
    fn run(&mut self, depth: usize, visit: &mut dyn FnMut(Homomorphism) -> bool) -> bool {
        if depth == self.steps.len() {
            return !visit(self.current());
        }
        match self.steps[depth] {
            Step::Var(x) => {
                for tv in 0..self.tgt.num_vars() {
                    if !self.var_ok(x, tv) {
                        continue;
                    }
                    self.vars[x] = Some(tv);
                    self.used[tv] = true;
                    let stop = self.run(depth + 1, visit);
                    self.used[tv] = false;
                    self.vars[x] = None;
                    if stop {
                        return true;
                    }
                }
                false
            }
            Step::Point(p) => {
                let x = self.src.point_var(p);
                match self.vars[x] {
                    Some(tv) => self.try_points(p, tv, depth, visit),
                    None => {
                        for tv in 0..self.tgt.num_vars() {
                            if !self.var_ok(x, tv) {
                                continue;
                            }
                            self.vars[x] = Some(tv);
                            self.used[tv] = true;
                            let stop = self.try_points(p, tv, depth, visit);
                            self.used[tv] = false;
                            self.vars[x] = None;
                            if stop {
                                return true;
                            }
                        }
                        false
                    }
                }
            }
        }
    }

    fn try_points(&mut self, p: usize, tv: usize, depth: usize, visit: &mut dyn FnMut(Homomorphism) -> bool) -> bool {
        let tgt = self.tgt;
        for &t in tgt.points_of_var(tv) {
            if !self.point_ok(p, t) {
                continue;
            }
            self.points[p] = t;
            let stop = self.run(depth + 1, visit);
            self.points[p] = UNSET;
            if stop {
                return true;
            }
        }
        false
    }
}

/// Calls `visit` on every homomorphism (in search order) until it returns
/// false. `fixed_vars[x]`, when given, forces the image of source variable `x`.
pub fn for_each_homomorphism(
    src: &Pattern,
    tgt: &dyn Target,
    fixed_vars: Option<&[usize]>,
    visit: &mut dyn FnMut(Homomorphism) -> bool,
) {
    if src.num_vars() > tgt.num_vars() {
        return;
    }
    if let Some(f) = fixed_vars {
        assert_eq!(f.len(), src.num_vars(), "fixed map must cover every source variable");
    }
    Search::new(src, tgt, fixed_vars).run(0, visit);
}

pub fn find_homomorphism_with(src: &Pattern, tgt: &dyn Target, fixed_vars: Option<&[usize]>) -> Option<Homomorphism> {
    let mut found = None;
    for_each_homomorphism(src, tgt, fixed_vars, &mut |h| {
        found = Some(h);
        false
    });
    found
}

pub fn find_homomorphism(src: &Pattern, tgt: &dyn Target) -> Option<Homomorphism> {
    find_homomorphism_with(src, tgt, None)
}

/// Set partitions of `items`, as restricted growth strings mapped to blocks.
fn set_partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    fn go(items: &[usize], i: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == items.len() {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(items[i]);
            go(items, i + 1, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![items[i]]);
        go(items, i + 1, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    go(items, 0, &mut Vec::new(), &mut out);
    out
}

/// The pattern obtained by identifying the points of each block, or `None`
/// if the identification is not allowed.
fn quotient(p: &Pattern, blocks_per_var: &[Vec<Vec<usize>>]) -> Option<(Pattern, Vec<usize>)> {
    let mut merge = vec![0; p.num_points()];
    let mut points = Vec::new();
    for (v, blocks) in blocks_per_var.iter().enumerate() {
        for block in blocks {
            for (i, &a) in block.iter().enumerate() {
                for &b in &block[i + 1..] {
                    if !p.mergeable(a, b) || p.dom_comparable(a, b) || p.explicitly_distinct(a, b) {
                        return None;
                    }
                }
                merge[a] = points.len();
            }
            let name = block.iter().map(|&a| p.point(a).name.as_str()).collect::<Vec<_>>().join("=");
            points.push(Point { var: v, name });
        }
    }
    let mut cpt = std::collections::BTreeMap::new();
    for (a, b, val) in p.cpt_entries() {
        let k = (merge[a].min(merge[b]), merge[a].max(merge[b]));
        if let Some(old) = cpt.insert(k, val) {
            if old != val {
                return None;
            }
        }
    }
    let dom = p.dom_order().iter().map(|&(a, b)| (merge[a], merge[b]));
    let diseq = p.diseq().iter().map(|&(a, b)| (merge[a], merge[b]));
    let q = Pattern::new(
        p.variables().to_vec(),
        points,
        cpt.into_iter().map(|((a, b), v)| (a, b, v)),
        p.var_order().iter().copied(),
        dom,
        diseq,
    )
    .ok()?;
    Some((q, merge))
}

/// Every consistent linear extension, each exactly once.
pub fn consistent_linear_extensions(p: &Pattern) -> Vec<LinearExtension> {
    let per_var: Vec<Vec<Vec<Vec<usize>>>> = (0..p.num_vars()).map(|v| set_partitions(p.points_of(v))).collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; p.num_vars()];
    loop {
        let blocks: Vec<Vec<Vec<usize>>> = (0..p.num_vars()).map(|v| per_var[v][choice[v]].clone()).collect();
        if let Some((q, merge)) = quotient(p, &blocks) {
            extend_orders(&q, &merge, &mut out);
        }
        let mut k = 0;
        while k < p.num_vars() {
            choice[k] += 1;
            if choice[k] < per_var[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
        if k == p.num_vars() {
            break;
        }
    }
    out
}

fn extend_orders(q: &Pattern, merge: &[usize], out: &mut Vec<LinearExtension>) {
    let vars: Vec<usize> = (0..q.num_vars()).collect();
    let var_exts = linear_extensions(&vars, &|a, b| q.var_less(a, b));
    let dom_exts: Vec<Vec<Vec<usize>>> = (0..q.num_vars())
        .map(|v| linear_extensions(q.points_of(v), &|a, b| q.dom_less(a, b)))
        .collect();
    for vext in &var_exts {
        let mut choice = vec![0usize; q.num_vars()];
        loop {
            let mut var_gen = Vec::new();
            for w in vext.windows(2) {
                var_gen.push((w[0], w[1]));
            }
            let mut dom_gen = Vec::new();
            let mut point_rank = vec![0; q.num_points()];
            for v in 0..q.num_vars() {
                let seq = &dom_exts[v][choice[v]];
                for (i, &t) in seq.iter().enumerate() {
                    point_rank[t] = i;
                }
                for w in seq.windows(2) {
                    dom_gen.push((w[0], w[1]));
                }
            }
            let mut var_rank = vec![0; q.num_vars()];
            for (i, &v) in vext.iter().enumerate() {
                var_rank[v] = i;
            }
            let total = Pattern::new(
                q.variables().to_vec(),
                q.points().to_vec(),
                q.cpt_entries(),
                var_gen,
                dom_gen,
                q.diseq().iter().copied(),
            )
            .expect("a linear extension of a valid pattern is valid");
            out.push(LinearExtension {
                merge: merge.to_vec(),
                pattern: total,
                var_rank,
                point_rank,
            });
            let mut k = 0;
            while k < q.num_vars() {
                choice[k] += 1;
                if choice[k] < dom_exts[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
            if k == q.num_vars() {
                break;
            }
        }
    }
}

#[derive(Debug, Clone)]
pub enum OccurrenceResult {
    /// One homomorphism per consistent linear extension of the target.
    Occurs {
        witnesses: Vec<(LinearExtension, Homomorphism)>,
    },
    /// An extension of the target that admits no homomorphism.
    NotOccurs { extension: LinearExtension },
}

impl OccurrenceResult {
    pub fn occurs(&self) -> bool {
        matches!(self, OccurrenceResult::Occurs { .. })
    }

    pub fn to_json_value(&self, src: &Pattern) -> Value {
        match self {
            OccurrenceResult::Occurs { witnesses } => json!({
                "verdict": "occurs",
                "witnesses": witnesses
                    .iter()
                    .map(|(ext, h)| json!({
                        "extension": ext.to_json_value(),
                        "map": h.to_json_value(src, ext),
                    }))
                    .collect::<Vec<_>>(),
            }),
            OccurrenceResult::NotOccurs { extension } => json!({
                "verdict": "not-occurs",
                "extension": extension.to_json_value(),
            }),
        }
    }
}

/// Whether `src` occurs in `tgt`. Stops at the first extension of `tgt`
/// without a homomorphism.
pub fn occurs(src: &Pattern, tgt: &Pattern) -> OccurrenceResult {
    let mut witnesses = Vec::new();
    for ext in consistent_linear_extensions(tgt) {
        match find_homomorphism(src, &ext) {
            Some(h) => witnesses.push((ext, h)),
            None => return OccurrenceResult::NotOccurs { extension: ext },
        }
    }
    OccurrenceResult::Occurs { witnesses }
}

pub fn occurs_bool(src: &Pattern, tgt: &Pattern) -> bool {
    consistent_linear_extensions(tgt)
        .iter()
        .all(|ext| find_homomorphism(src, ext).is_some())
}

/// A homomorphism from `src` into `inst` equipped with the given orders.
pub fn find_in_instance(
    src: &Pattern,
    inst: &Instance,
    var_order: &TotalOrder,
    dom_order: &TotalOrder,
) -> Result<Option<Homomorphism>> {
    let view = InstanceView::new(inst, var_order, dom_order)?;
    Ok(find_homomorphism(src, &view))
}

pub fn occurs_in_instance(src: &Pattern, inst: &Instance, var_order: &TotalOrder, dom_order: &TotalOrder) -> Result<bool> {
    Ok(find_in_instance(src, inst, var_order, dom_order)?.is_some())
}

/// Default cap on the number of order pairs [`in_class`] may try.
pub const DEFAULT_ORDER_CAP: u64 = 1_000_000;

/// Number of order pairs [`in_class`] would have to consider.
pub fn order_pairs_needed(src: &Pattern, inst: &Instance) -> u64 {
    let nv = if src.has_var_order() { factorial_sat(inst.num_vars()) } else { 1 };
    let nd = if src.has_dom_order() { factorial_sat(inst.universe().len()) } else { 1 };
    nv.saturating_mul(nd)
}

fn factorial_sat(n: usize) -> u64 {
    (1..=n as u64).fold(1u64, |acc, k| acc.saturating_mul(k))
}

/// Some pair of total orders under which `src` does not occur in `inst`, or
/// `None` if there is none. Orders on a dimension the pattern leaves
/// unconstrained are irrelevant and fixed to the identity. Candidates are
/// tried lexicographically (variable order outermost), starting from the
/// identity orders.
pub fn in_class(src: &Pattern, inst: &Instance, cap: u64) -> Result<Option<(TotalOrder, TotalOrder)>> {
    let needed = order_pairs_needed(src, inst);
    if needed > cap {
        return Err(Error::BudgetExceeded(cap));
    }
    let var_perms = if src.has_var_order() {
        permutations(inst.num_vars())
    } else {
        vec![(0..inst.num_vars()).collect()]
    };
    let dom_perms = if src.has_dom_order() {
        permutations(inst.universe().len())
    } else {
        vec![(0..inst.universe().len()).collect()]
    };
    let nd = dom_perms.len();
    let total = var_perms.len() * nd;
    let hit = (0..total).into_par_iter().find_first(|&i| {
        let vo = TotalOrder::from_sequence(var_perms[i / nd].clone()).expect("permutation");
        let dord = TotalOrder::from_sequence(dom_perms[i % nd].clone()).expect("permutation");
        let view = InstanceView::new(inst, &vo, &dord).expect("sizes match");
        find_homomorphism(src, &view).is_none()
    });
    Ok(hit.map(|i| {
        (
            TotalOrder::from_sequence(var_perms[i / nd].clone()).expect("permutation"),
            TotalOrder::from_sequence(dom_perms[i % nd].clone()).expect("permutation"),
        )
    }))
}
