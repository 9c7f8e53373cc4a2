//! Binary CSP instances over a single ordered value universe.
//!
//! Every variable draws its domain from one [`ValueUniverse`]; relations are
//! stored once per unordered variable pair as a universe-sized boolean matrix,
//! so both orientations answer in constant time and domain reductions never
//! touch the relations. A pair without a stored relation is unconstrained.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The value set `D` with its total order given by list position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueUniverse {
    values: Vec<i64>,
    index: HashMap<i64, usize>,
}

impl ValueUniverse {
    pub fn new(values: Vec<i64>) -> Result<Self> {
        let mut index = HashMap::with_capacity(values.len());
        for (i, &v) in values.iter().enumerate() {
            if index.insert(v, i).is_some() {
                return Err(Error::Malformed(format!("value {v} repeated in universe")));
            }
        }
        Ok(ValueUniverse { values, index })
    }

    /// Universe `lo..=hi` in numeric order.
    pub fn range(lo: i64, hi: i64) -> Self {
        ValueUniverse::new((lo..=hi).collect()).expect("distinct range")
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn label(&self, idx: usize) -> i64 {
        self.values[idx]
    }

    pub fn labels(&self) -> &[i64] {
        &self.values
    }

    pub fn index_of(&self, label: i64) -> Option<usize> {
        self.index.get(&label).copied()
    }
}

/// Compatibility matrix of one variable pair `(x, y)` with `x < y`, indexed by
/// universe positions.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Relation {
    width: usize,
    allowed: Vec<bool>,
}

impl Relation {
    fn empty(width: usize) -> Self {
        Relation {
            width,
            allowed: vec![false; width * width],
        }
    }

    fn get(&self, a: usize, b: usize) -> bool {
        self.allowed[a * self.width + b]
    }

    fn set(&mut self, a: usize, b: usize, v: bool) {
        self.allowed[a * self.width + b] = v;
    }
}

/// A binary CSP instance.
///
/// Domains are kept in universe order. Outside of a wipeout produced by
/// [`crate::ac::enforce_ac`] every domain is non-empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    universe: ValueUniverse,
    variables: Vec<String>,
    domains: Vec<Vec<usize>>,
    relations: BTreeMap<(usize, usize), Relation>,
}

/// A total assignment, one universe index per variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment(pub Vec<usize>);

impl Assignment {
    pub fn value(&self, var: usize) -> usize {
        self.0[var]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Variable name to value label.
    pub fn to_labels(&self, inst: &Instance) -> BTreeMap<String, i64> {
        self.0
            .iter()
            .enumerate()
            .map(|(v, &a)| (inst.variable_name(v).to_string(), inst.universe().label(a)))
            .collect()
    }
}

impl Instance {
    /// Builds an unconstrained instance. `domains[v]` lists value labels of
    /// variable `v`; order and repetitions are normalised away.
    pub fn new(universe: ValueUniverse, variables: Vec<String>, domains: Vec<Vec<i64>>) -> Result<Self> {
        if domains.len() != variables.len() {
            return Err(Error::Malformed(format!(
                "{} variables but {} domains",
                variables.len(),
                domains.len()
            )));
        }
        let mut seen = HashMap::new();
        for (i, name) in variables.iter().enumerate() {
            if seen.insert(name.clone(), i).is_some() {
                return Err(Error::Malformed(format!("variable `{name}` declared twice")));
            }
        }
        let mut doms = Vec::with_capacity(domains.len());
        for (name, labels) in variables.iter().zip(domains) {
            let mut idx = Vec::with_capacity(labels.len());
            for value in labels {
                let i = universe.index_of(value).ok_or_else(|| Error::ValueOutsideUniverse {
                    variable: name.clone(),
                    value,
                })?;
                idx.push(i);
            }
            idx.sort_unstable();
            idx.dedup();
            if idx.is_empty() {
                return Err(Error::EmptyDomain(name.clone()));
            }
            doms.push(idx);
        }
        Ok(Instance {
            universe,
            variables,
            domains: doms,
            relations: BTreeMap::new(),
        })
    }

    /// Variables `0..n` named `x1..xn`, all with the full universe as domain.
    pub fn with_uniform_domains(universe: ValueUniverse, n: usize) -> Self {
        let labels = universe.labels().to_vec();
        let names = (1..=n).map(|i| format!("x{i}")).collect();
        Instance::new(universe, names, vec![labels; n]).expect("uniform domains are valid")
    }

    pub fn universe(&self) -> &ValueUniverse {
        &self.universe
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn variable_name(&self, v: usize) -> &str {
        &self.variables[v]
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// Domain of `v` as universe indices in universe order.
    pub fn domain(&self, v: usize) -> &[usize] {
        &self.domains[v]
    }

    pub fn in_domain(&self, v: usize, a: usize) -> bool {
        self.domains[v].binary_search(&a).is_ok()
    }

    pub fn num_points(&self) -> usize {
        self.domains.iter().map(Vec::len).sum()
    }

    pub fn max_domain_size(&self) -> usize {
        self.domains.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Whether `(x, a)` and `(y, b)` are compatible. Distinct variables only.
    pub fn compatible(&self, x: usize, a: usize, y: usize, b: usize) -> bool {
        debug_assert_ne!(x, y);
        let (key, a, b) = if x < y { ((x, y), a, b) } else { ((y, x), b, a) };
        match self.relations.get(&key) {
            Some(r) => r.get(a, b),
            None => true,
        }
    }

    /// Whether a relation is stored for the pair. A stored relation may still
    /// be complete on the current domains.
    pub fn has_relation(&self, x: usize, y: usize) -> bool {
        let key = if x < y { (x, y) } else { (y, x) };
        self.relations.contains_key(&key)
    }

    /// Pairs `(x, y)`, `x < y`, with a stored relation.
    pub fn constrained_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.relations.keys().copied()
    }

    /// Whether the relation on `{x, y}` excludes some pair of current domain values.
    pub fn is_nontrivial(&self, x: usize, y: usize) -> bool {
        self.has_relation(x, y)
            && self.domains[x]
                .iter()
                .any(|&a| self.domains[y].iter().any(|&b| !self.compatible(x, a, y, b)))
    }

    /// Neighbour lists over stored relations.
    pub fn neighbours(&self) -> Vec<Vec<usize>> {
        let mut nb = vec![Vec::new(); self.num_vars()];
        for &(x, y) in self.relations.keys() {
            nb[x].push(y);
            nb[y].push(x);
        }
        nb
    }

    /// Declares the relation on `{x, y}` from allowed pairs given as universe
    /// indices oriented `(value of x, value of y)`.
    pub fn add_constraint(&mut self, x: usize, y: usize, allowed: impl IntoIterator<Item = (usize, usize)>) -> Result<()> {
        if x == y || x >= self.num_vars() || y >= self.num_vars() {
            return Err(Error::Malformed(format!("invalid scope ({x}, {y})")));
        }
        let key = if x < y { (x, y) } else { (y, x) };
        if self.relations.contains_key(&key) {
            return Err(Error::DuplicateConstraint(
                self.variables[key.0].clone(),
                self.variables[key.1].clone(),
            ));
        }
        let mut rel = Relation::empty(self.universe.len());
        for (a, b) in allowed {
            for (var, val) in [(x, a), (y, b)] {
                if !self.in_domain(var, val) {
                    return Err(Error::ValueNotInDomain {
                        variable: self.variables[var].clone(),
                        value: self.universe.label(val),
                    });
                }
            }
            if x < y {
                rel.set(a, b, true);
            } else {
                rel.set(b, a, true);
            }
        }
        self.relations.insert(key, rel);
        Ok(())
    }

    /// Declares the relation on `{x, y}` from a predicate over value labels.
    pub fn add_constraint_fn(&mut self, x: usize, y: usize, allowed: impl Fn(i64, i64) -> bool) -> Result<()> {
        let pairs: Vec<(usize, usize)> = self.domains[x]
            .iter()
            .flat_map(|&a| self.domains[y].iter().map(move |&b| (a, b)))
            .filter(|&(a, b)| allowed(self.universe.label(a), self.universe.label(b)))
            .collect();
        self.add_constraint(x, y, pairs)
    }

    /// Overwrites one entry of an existing relation (creating a complete one
    /// first when the pair is unconstrained).
    pub fn set_compatible(&mut self, x: usize, a: usize, y: usize, b: usize, value: bool) {
        let (key, a, b) = if x < y { ((x, y), a, b) } else { ((y, x), b, a) };
        let width = self.universe.len();
        let rel = self.relations.entry(key).or_insert_with(|| Relation {
            width,
            allowed: vec![true; width * width],
        });
        rel.set(a, b, value);
    }

    pub(crate) fn set_domain(&mut self, v: usize, domain: Vec<usize>) {
        self.domains[v] = domain;
    }

    /// Domain of `var` becomes `{value}` (a universe index).
    pub fn restrict(&self, var: usize, value: usize) -> Result<Instance> {
        if !self.in_domain(var, value) {
            return Err(Error::ValueNotInDomain {
                variable: self.variables[var].clone(),
                value: self.universe.label(value),
            });
        }
        let mut out = self.clone();
        out.domains[var] = vec![value];
        Ok(out)
    }

    /// Sub-instance on `vars` (in the given order) with the same domains and
    /// relations.
    pub fn subinstance(&self, vars: &[usize]) -> Instance {
        let mut out = Instance {
            universe: self.universe.clone(),
            variables: vars.iter().map(|&v| self.variables[v].clone()).collect(),
            domains: vars.iter().map(|&v| self.domains[v].clone()).collect(),
            relations: BTreeMap::new(),
        };
        for (i, &x) in vars.iter().enumerate() {
            for (j, &y) in vars.iter().enumerate().skip(i + 1) {
                let key = if x < y { (x, y) } else { (y, x) };
                if let Some(rel) = self.relations.get(&key) {
                    let mut r = Relation::empty(rel.width);
                    for a in 0..rel.width {
                        for b in 0..rel.width {
                            r.set(a, b, self.compatible(x, a, y, b));
                        }
                    }
                    out.relations.insert((i, j), r);
                }
            }
        }
        out
    }

    /// Same instance with variables listed in `order` (`order[k]` becomes variable `k`).
    pub fn reorder_variables(&self, order: &[usize]) -> Instance {
        self.subinstance(order)
    }

    pub fn has_empty_domain(&self) -> bool {
        self.domains.iter().any(Vec::is_empty)
    }

    /// Parses the JSON instance format.
    pub fn from_json(text: &str) -> Result<Instance> {
        let file: InstanceFile = serde_json::from_str(text)?;
        file.into_instance()
    }

    /// Canonical JSON text: sorted keys, scopes by variable index, allowed
    /// tuples in lexicographic order, complete relations omitted.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&InstanceFile::from_instance(self)).expect("serialisable")
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstraintFile {
    allowed: Vec<(i64, i64)>,
    scope: (String, String),
}

// Field order is alphabetical so the derived serialiser emits sorted keys.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    constraints: Vec<ConstraintFile>,
    domains: BTreeMap<String, Vec<i64>>,
    universe: Vec<i64>,
    variables: Vec<String>,
}

impl InstanceFile {
    fn into_instance(self) -> Result<Instance> {
        let universe = ValueUniverse::new(self.universe)?;
        let mut domains = Vec::with_capacity(self.variables.len());
        for name in &self.variables {
            let d = self
                .domains
                .get(name)
                .ok_or_else(|| Error::Malformed(format!("no domain given for `{name}`")))?;
            domains.push(d.clone());
        }
        if let Some(extra) = self.domains.keys().find(|k| !self.variables.contains(k)) {
            return Err(Error::UnknownVariable(extra.clone()));
        }
        let mut inst = Instance::new(universe, self.variables, domains)?;
        for c in self.constraints {
            let x = inst.var_index(&c.scope.0)?;
            let y = inst.var_index(&c.scope.1)?;
            let mut pairs = Vec::with_capacity(c.allowed.len());
            for (a, b) in c.allowed {
                let ai = inst.universe.index_of(a).ok_or_else(|| Error::ValueOutsideUniverse {
                    variable: c.scope.0.clone(),
                    value: a,
                })?;
                let bi = inst.universe.index_of(b).ok_or_else(|| Error::ValueOutsideUniverse {
                    variable: c.scope.1.clone(),
                    value: b,
                })?;
                pairs.push((ai, bi));
            }
            inst.add_constraint(x, y, pairs)?;
        }
        Ok(inst)
    }

    fn from_instance(inst: &Instance) -> Self {
        let u = &inst.universe;
        let mut constraints = Vec::new();
        for &(x, y) in inst.relations.keys() {
            if !inst.is_nontrivial(x, y) {
                continue;
            }
            let mut allowed: Vec<(i64, i64)> = inst.domains[x]
                .iter()
                .flat_map(|&a| inst.domains[y].iter().map(move |&b| (a, b)))
                .filter(|&(a, b)| inst.compatible(x, a, y, b))
                .map(|(a, b)| (u.label(a), u.label(b)))
                .collect();
            allowed.sort_unstable();
            constraints.push(ConstraintFile {
                allowed,
                scope: (inst.variables[x].clone(), inst.variables[y].clone()),
            });
        }
        InstanceFile {
            constraints,
            domains: inst
                .variables
                .iter()
                .zip(&inst.domains)
                .map(|(n, d)| (n.clone(), d.iter().map(|&a| u.label(a)).collect()))
                .collect(),
            universe: u.labels().to_vec(),
            variables: inst.variables.clone(),
        }
    }
}
