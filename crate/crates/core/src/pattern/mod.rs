//! Ordered binary patterns.
//!
//! A pattern is a partial binary CSP: points are namespaced per variable, the
//! compatibility function is defined on some pairs of points of distinct
//! variables, and there may be strict partial orders on the variables and on
//! the points of each variable, together with explicit disequalities between
//! points of one variable.

mod builtin;
mod json;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use builtin::PatternName;

use crate::error::{Error, Result};
use crate::order::{has_cycle, permutations, transitive_closure};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point {
    pub var: usize,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    variables: Vec<String>,
    points: Vec<Point>,
    by_var: Vec<Vec<usize>>,
    cpt: BTreeMap<(usize, usize), bool>,
    var_order: BTreeSet<(usize, usize)>,
    dom_order: BTreeSet<(usize, usize)>,
    diseq: BTreeSet<(usize, usize)>,
    cpt_matrix: Vec<Vec<Option<bool>>>,
    var_less: Vec<Vec<bool>>,
    dom_less: Vec<Vec<bool>>,
    distinct: Vec<Vec<bool>>,
}

fn key(p: usize, q: usize) -> (usize, usize) {
    if p < q {
        (p, q)
    } else {
        (q, p)
    }
}

impl Pattern {
    /// Builds and validates a pattern. Points are renumbered so that they are
    /// grouped by variable (stable within a variable); all other arguments refer
    /// to the indices of `points` as given.
    pub fn new(
        variables: Vec<String>,
        points: Vec<Point>,
        cpt: impl IntoIterator<Item = (usize, usize, bool)>,
        var_order: impl IntoIterator<Item = (usize, usize)>,
        dom_order: impl IntoIterator<Item = (usize, usize)>,
        diseq: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Pattern> {
        let nv = variables.len();
        let np = points.len();
        let mut names = BTreeSet::new();
        for v in &variables {
            if !names.insert(v) {
                return Err(Error::InvalidPattern(format!("variable `{v}` declared twice")));
            }
        }
        let mut seen = BTreeSet::new();
        for p in &points {
            if p.var >= nv {
                return Err(Error::InvalidPattern(format!("point `{}` has no variable", p.name)));
            }
            if !seen.insert((p.var, p.name.clone())) {
                return Err(Error::InvalidPattern(format!(
                    "point `{}.{}` declared twice",
                    variables[p.var], p.name
                )));
            }
        }
        let mut order: Vec<usize> = (0..np).collect();
        order.sort_by_key(|&i| points[i].var);
        let mut remap = vec![0; np];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        let points: Vec<Point> = order.iter().map(|&i| points[i].clone()).collect();
        let check = |p: usize| {
            if p >= np {
                Err(Error::UnknownPoint(format!("#{p}")))
            } else {
                Ok(remap[p])
            }
        };

        let mut cpt_map = BTreeMap::new();
        for (p, q, val) in cpt {
            let (p, q) = (check(p)?, check(q)?);
            if points[p].var == points[q].var {
                return Err(Error::InvalidPattern(format!(
                    "compatibility between points of one variable `{}`",
                    variables[points[p].var]
                )));
            }
            if let Some(old) = cpt_map.insert(key(p, q), val) {
                if old != val {
                    return Err(Error::InvalidPattern("pair declared both positive and negative".into()));
                }
            }
        }
        let mut vo = BTreeSet::new();
        for (a, b) in var_order {
            if a >= nv || b >= nv {
                return Err(Error::UnknownVariable(format!("#{}", a.max(b))));
            }
            vo.insert((a, b));
        }
        let mut dord = BTreeSet::new();
        for (p, q) in dom_order {
            let (p, q) = (check(p)?, check(q)?);
            if points[p].var != points[q].var {
                return Err(Error::InvalidPattern("domain order across variables".into()));
            }
            dord.insert((p, q));
        }
        let mut dq = BTreeSet::new();
        for (p, q) in diseq {
            let (p, q) = (check(p)?, check(q)?);
            if p == q || points[p].var != points[q].var {
                return Err(Error::InvalidPattern(
                    "disequality must relate two points of one variable".into(),
                ));
            }
            dq.insert(key(p, q));
        }
        Pattern::assemble(variables, points, cpt_map, vo, dord, dq)
    }

    fn assemble(
        variables: Vec<String>,
        points: Vec<Point>,
        cpt: BTreeMap<(usize, usize), bool>,
        var_order: BTreeSet<(usize, usize)>,
        dom_order: BTreeSet<(usize, usize)>,
        diseq: BTreeSet<(usize, usize)>,
    ) -> Result<Pattern> {
        let nv = variables.len();
        let np = points.len();
        let var_less = transitive_closure(nv, var_order.iter().copied());
        if has_cycle(&var_less) {
            return Err(Error::CyclicOrder("variable order".into()));
        }
        let dom_less = transitive_closure(np, dom_order.iter().copied());
        if has_cycle(&dom_less) {
            return Err(Error::CyclicOrder("domain order".into()));
        }
        let mut by_var = vec![Vec::new(); nv];
        for (i, p) in points.iter().enumerate() {
            by_var[p.var].push(i);
        }
        let mut cpt_matrix = vec![vec![None; np]; np];
        for (&(p, q), &v) in &cpt {
            cpt_matrix[p][q] = Some(v);
            cpt_matrix[q][p] = Some(v);
        }
        let mut distinct = vec![vec![false; np]; np];
        for pts in &by_var {
            for &p in pts {
                for &q in pts {
                    if p == q {
                        continue;
                    }
                    let conflict = (0..np).any(|r| {
                        matches!((cpt_matrix[p][r], cpt_matrix[q][r]), (Some(a), Some(b)) if a != b)
                    });
                    distinct[p][q] = conflict || dom_less[p][q] || dom_less[q][p] || diseq.contains(&key(p, q));
                }
            }
        }
        Ok(Pattern {
            variables,
            points,
            by_var,
            cpt,
            var_order,
            dom_order,
            diseq,
            cpt_matrix,
            var_less,
            dom_less,
            distinct,
        })
    }

    pub fn builder() -> PatternBuilder {
        PatternBuilder::default()
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, p: usize) -> &Point {
        &self.points[p]
    }

    pub fn point_var(&self, p: usize) -> usize {
        self.points[p].var
    }

    /// `var.name` label of a point.
    pub fn point_label(&self, p: usize) -> String {
        format!("{}.{}", self.variables[self.points[p].var], self.points[p].name)
    }

    pub fn points_of(&self, var: usize) -> &[usize] {
        &self.by_var[var]
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn point_index(&self, var: &str, name: &str) -> Result<usize> {
        let v = self.var_index(var)?;
        self.by_var[v]
            .iter()
            .copied()
            .find(|&p| self.points[p].name == name)
            .ok_or_else(|| Error::UnknownPoint(format!("{var}.{name}")))
    }

    pub fn cpt(&self, p: usize, q: usize) -> Option<bool> {
        self.cpt_matrix[p][q]
    }

    /// Defined compatibilities as `(p, q, value)` with `p < q`.
    pub fn cpt_entries(&self) -> impl Iterator<Item = (usize, usize, bool)> + '_ {
        self.cpt.iter().map(|(&(p, q), &v)| (p, q, v))
    }

    pub fn positive_edges(&self) -> Vec<(usize, usize)> {
        self.cpt_entries().filter(|e| e.2).map(|(p, q, _)| (p, q)).collect()
    }

    pub fn negative_edges(&self) -> Vec<(usize, usize)> {
        self.cpt_entries().filter(|e| !e.2).map(|(p, q, _)| (p, q)).collect()
    }

    /// Generator pairs `(a, b)` meaning `a < b`.
    pub fn var_order(&self) -> &BTreeSet<(usize, usize)> {
        &self.var_order
    }

    /// Generator pairs `(p, q)` meaning `p < q`.
    pub fn dom_order(&self) -> &BTreeSet<(usize, usize)> {
        &self.dom_order
    }

    pub fn diseq(&self) -> &BTreeSet<(usize, usize)> {
        &self.diseq
    }

    /// Strict variable order, transitively closed.
    pub fn var_less(&self, a: usize, b: usize) -> bool {
        self.var_less[a][b]
    }

    /// Strict domain order, transitively closed.
    pub fn dom_less(&self, p: usize, q: usize) -> bool {
        self.dom_less[p][q]
    }

    pub fn dom_comparable(&self, p: usize, q: usize) -> bool {
        self.dom_less[p][q] || self.dom_less[q][p]
    }

    /// Explicit or implicit disequality: the two points of one variable must
    /// denote different values.
    pub fn distinct(&self, p: usize, q: usize) -> bool {
        self.distinct[p][q]
    }

    pub fn explicitly_distinct(&self, p: usize, q: usize) -> bool {
        self.diseq.contains(&key(p, q))
    }

    pub fn has_var_order(&self) -> bool {
        !self.var_order.is_empty()
    }

    pub fn has_dom_order(&self) -> bool {
        !self.dom_order.is_empty()
    }

    /// Every point lives in exactly one variable's domain.
    pub fn is_basic(&self) -> bool {
        true
    }

    /// Pairs `(p, q)`, `p < q`, of one variable that no third point tells apart.
    pub fn mergeable_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for pts in &self.by_var {
            for (i, &p) in pts.iter().enumerate() {
                for &q in &pts[i + 1..] {
                    if self.mergeable(p, q) {
                        out.push((p, q));
                    }
                }
            }
        }
        out
    }

    pub fn mergeable(&self, p: usize, q: usize) -> bool {
        self.points[p].var == self.points[q].var
            && p != q
            && (0..self.num_points()).all(|r| {
                !matches!((self.cpt_matrix[p][r], self.cpt_matrix[q][r]), (Some(a), Some(b)) if a != b)
            })
    }

    /// Points outside the domain order with at most one defined compatibility,
    /// which is positive.
    pub fn dangling_points(&self) -> Vec<usize> {
        (0..self.num_points())
            .filter(|&p| {
                let ordered = self.dom_order.iter().any(|&(a, b)| a == p || b == p);
                let defined: Vec<bool> = self.cpt_matrix[p].iter().flatten().copied().collect();
                !ordered && defined.len() <= 1 && defined.iter().all(|&v| v)
            })
            .collect()
    }

    pub fn is_simple(&self) -> bool {
        self.is_basic() && self.mergeable_pairs().is_empty() && self.dangling_points().is_empty()
    }

    fn with_orders(&self, var_order: BTreeSet<(usize, usize)>, dom_order: BTreeSet<(usize, usize)>) -> Pattern {
        Pattern::assemble(
            self.variables.clone(),
            self.points.clone(),
            self.cpt.clone(),
            var_order,
            dom_order,
            self.diseq.clone(),
        )
        .expect("reordering keeps a valid pattern valid")
    }

    /// Reverses the domain order.
    pub fn inv_dom(&self) -> Pattern {
        let d = self.dom_order.iter().map(|&(a, b)| (b, a)).collect();
        self.with_orders(self.var_order.clone(), d)
    }

    /// Reverses the variable order.
    pub fn inv_var(&self) -> Pattern {
        let v = self.var_order.iter().map(|&(a, b)| (b, a)).collect();
        self.with_orders(v, self.dom_order.clone())
    }

    /// Drops both orders, keeping compatibilities and disequalities.
    pub fn unordered(&self) -> Pattern {
        self.with_orders(BTreeSet::new(), BTreeSet::new())
    }

    pub fn without_var_order(&self) -> Pattern {
        self.with_orders(BTreeSet::new(), self.dom_order.clone())
    }

    pub fn without_dom_order(&self) -> Pattern {
        self.with_orders(self.var_order.clone(), BTreeSet::new())
    }

    /// Adds variable order generators.
    pub fn with_var_order(&self, extra: impl IntoIterator<Item = (usize, usize)>) -> Result<Pattern> {
        let mut v = self.var_order.clone();
        v.extend(extra);
        Pattern::assemble(
            self.variables.clone(),
            self.points.clone(),
            self.cpt.clone(),
            v,
            self.dom_order.clone(),
            self.diseq.clone(),
        )
    }

    /// An isomorphism-invariant key: the lexicographically smallest encoding
    /// over all renamings of variables and of points within each variable.
    /// Orders enter through their transitive closures and disequalities
    /// through the explicit-or-implicit relation, so semantically identical
    /// presentations share a key.
    pub fn canonical_form(&self) -> Vec<u32> {
        let nv = self.num_vars();
        let mut best: Option<Vec<u32>> = None;
        for vperm in permutations(nv) {
            // vperm[k] = old variable placed at position k
            let per_var: Vec<Vec<Vec<usize>>> = vperm
                .iter()
                .map(|&v| permutations(self.by_var[v].len()).into_iter().map(|perm| {
                    perm.iter().map(|&i| self.by_var[v][i]).collect()
                }).collect())
                .collect();
            let mut choice = vec![0usize; nv];
            loop {
                let mut new_index = vec![0u32; self.num_points()];
                let mut next = 0u32;
                for (k, _) in vperm.iter().enumerate() {
                    for &p in &per_var[k][choice[k]] {
                        new_index[p] = next;
                        next += 1;
                    }
                }
                let mut var_pos = vec![0u32; nv];
                for (k, &v) in vperm.iter().enumerate() {
                    var_pos[v] = k as u32;
                }
                let enc = self.encode(&var_pos, &new_index, &vperm);
                if best.as_ref().map_or(true, |b| enc < *b) {
                    best = Some(enc);
                }
                // odometer over point permutations
                let mut k = 0;
                while k < nv {
                    choice[k] += 1;
                    if choice[k] < per_var[k].len() {
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
        best.unwrap_or_default()
    }

    fn encode(&self, var_pos: &[u32], idx: &[u32], vperm: &[usize]) -> Vec<u32> {
        let np = self.num_points();
        let mut out = vec![self.num_vars() as u32];
        out.extend(vperm.iter().map(|&v| self.by_var[v].len() as u32));
        let mut cpt: Vec<(u32, u32, u32)> = self
            .cpt
            .iter()
            .map(|(&(p, q), &v)| {
                let (a, b) = (idx[p].min(idx[q]), idx[p].max(idx[q]));
                (a, b, v as u32)
            })
            .collect();
        cpt.sort_unstable();
        out.push(u32::MAX);
        for (a, b, v) in cpt {
            out.extend([a, b, v]);
        }
        let mut vo = Vec::new();
        for a in 0..self.num_vars() {
            for b in 0..self.num_vars() {
                if self.var_less[a][b] {
                    vo.push((var_pos[a], var_pos[b]));
                }
            }
        }
        vo.sort_unstable();
        out.push(u32::MAX);
        for (a, b) in vo {
            out.extend([a, b]);
        }
        let mut dl = Vec::new();
        let mut ds = Vec::new();
        for p in 0..np {
            for q in 0..np {
                if self.dom_less[p][q] {
                    dl.push((idx[p], idx[q]));
                }
                if p < q && self.distinct[p][q] {
                    ds.push((idx[p].min(idx[q]), idx[p].max(idx[q])));
                }
            }
        }
        dl.sort_unstable();
        ds.sort_unstable();
        out.push(u32::MAX);
        for (a, b) in dl {
            out.extend([a, b]);
        }
        out.push(u32::MAX);
        for (a, b) in ds {
            out.extend([a, b]);
        }
        out
    }

    pub fn is_isomorphic(&self, other: &Pattern) -> bool {
        self.num_vars() == other.num_vars()
            && self.num_points() == other.num_points()
            && self.canonical_form() == other.canonical_form()
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

/// Incremental construction with textual point references `var.name`; a bare
/// `var` refers to the only point of a single-point variable.
#[derive(Debug, Default, Clone)]
pub struct PatternBuilder {
    variables: Vec<String>,
    points: Vec<Point>,
    cpt: Vec<(String, String, bool)>,
    var_order: Vec<(String, String)>,
    dom_order: Vec<(String, String)>,
    diseq: Vec<(String, String)>,
}

impl PatternBuilder {
    /// Declares a variable with the given point names.
    pub fn var(mut self, name: &str, points: &[&str]) -> Self {
        let v = self.variables.len();
        self.variables.push(name.to_string());
        for p in points {
            self.points.push(Point {
                var: v,
                name: p.to_string(),
            });
        }
        self
    }

    pub fn pos(mut self, p: &str, q: &str) -> Self {
        self.cpt.push((p.into(), q.into(), true));
        self
    }

    pub fn neg(mut self, p: &str, q: &str) -> Self {
        self.cpt.push((p.into(), q.into(), false));
        self
    }

    /// `a < b` on variables.
    pub fn var_lt(mut self, a: &str, b: &str) -> Self {
        self.var_order.push((a.into(), b.into()));
        self
    }

    /// `p < q` on points of one variable.
    pub fn dom_lt(mut self, p: &str, q: &str) -> Self {
        self.dom_order.push((p.into(), q.into()));
        self
    }

    pub fn diseq(mut self, p: &str, q: &str) -> Self {
        self.diseq.push((p.into(), q.into()));
        self
    }

    fn var_ref(&self, name: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    fn point_ref(&self, r: &str) -> Result<usize> {
        let (var, pt) = match r.split_once('.') {
            Some((v, p)) => (v, Some(p)),
            None => (r, None),
        };
        let v = self.var_ref(var)?;
        let mut it = self.points.iter().enumerate().filter(|(_, p)| p.var == v);
        match pt {
            Some(name) => it
                .find(|(_, p)| p.name == name)
                .map(|(i, _)| i)
                .ok_or_else(|| Error::UnknownPoint(r.to_string())),
            None => match (it.next(), it.next()) {
                (Some((i, _)), None) => Ok(i),
                _ => Err(Error::UnknownPoint(r.to_string())),
            },
        }
    }

    pub fn build(self) -> Result<Pattern> {
        let cpt = self
            .cpt
            .iter()
            .map(|(p, q, v)| Ok((self.point_ref(p)?, self.point_ref(q)?, *v)))
            .collect::<Result<Vec<_>>>()?;
        let vo = self
            .var_order
            .iter()
            .map(|(a, b)| Ok((self.var_ref(a)?, self.var_ref(b)?)))
            .collect::<Result<Vec<_>>>()?;
        let pair = |list: &[(String, String)]| {
            list.iter()
                .map(|(p, q)| Ok((self.point_ref(p)?, self.point_ref(q)?)))
                .collect::<Result<Vec<_>>>()
        };
        let dord = pair(&self.dom_order)?;
        let dq = pair(&self.diseq)?;
        Pattern::new(self.variables, self.points, cpt, vo, dord, dq)
    }
}
