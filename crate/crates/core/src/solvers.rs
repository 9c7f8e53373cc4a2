//! Backtrack-free solvers for arc-consistent instances that avoid one of the
//! AC-solvable patterns, plus maintaining-arc-consistency search.
//!
//! None of the solvers checks pattern-freeness up front. They build an
//! assignment greedily and, if the construction breaks down, report the
//! violated precondition together with an occurrence of the class pattern
//! when one exists under the given orders.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};

use crate::ac::{enforce_ac, is_arc_consistent};
use crate::error::{Error, Result};
use crate::instance::{Assignment, Instance};
use crate::occurrence::{find_homomorphism, Homomorphism, InstanceView, Target};
use crate::order::TotalOrder;
use crate::pattern::{Pattern, PatternName};

/// One decision: the candidate values (universe indices) left for `variable`
/// and the value chosen among them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Step {
    pub variable: usize,
    pub candidates: Vec<usize>,
    pub chosen: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveStatus {
    Solution(Assignment),
    /// Arc consistency emptied a domain: the instance has no solution.
    Wipeout,
    PreconditionViolated {
        reason: String,
        witness: Option<Witness>,
    },
}

/// An occurrence of the class pattern in the solver's input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub pattern: PatternName,
    pub map: Homomorphism,
    /// Pattern point label to `variable=value`.
    pub labels: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    pub trace: Vec<Step>,
}

impl SolveOutcome {
    pub fn solution(&self) -> Option<&Assignment> {
        match &self.status {
            SolveStatus::Solution(a) => Some(a),
            _ => None,
        }
    }

    pub fn is_violation(&self) -> bool {
        matches!(self.status, SolveStatus::PreconditionViolated { .. })
    }

    /// Number of times a decision was undone. The solvers here never undo one.
    pub fn backtracks(&self) -> usize {
        0
    }

    pub fn to_json_value(&self, inst: &Instance) -> Value {
        let u = inst.universe();
        let trace: Vec<Value> = self
            .trace
            .iter()
            .map(|s| {
                json!({
                    "variable": inst.variable_name(s.variable),
                    "candidates": s.candidates.iter().map(|&a| u.label(a)).collect::<Vec<_>>(),
                    "chosen": s.chosen.map(|a| u.label(a)),
                })
            })
            .collect();
        let status = match &self.status {
            SolveStatus::Solution(a) => json!({"status": "solution", "assignment": a.to_labels(inst)}),
            SolveStatus::Wipeout => json!({"status": "wipeout"}),
            SolveStatus::PreconditionViolated { reason, witness } => json!({
                "status": "precondition-violated",
                "reason": reason,
                "witness": witness.as_ref().map(|w| json!({"pattern": w.pattern.as_str(), "map": w.labels})),
            }),
        };
        let mut out = status;
        out["trace"] = Value::Array(trace);
        out
    }
}

fn violation(reason: impl Into<String>, witness: Option<Witness>, trace: Vec<Step>) -> SolveOutcome {
    SolveOutcome {
        status: SolveStatus::PreconditionViolated {
            reason: reason.into(),
            witness,
        },
        trace,
    }
}

fn check_orders(inst: &Instance, var_order: &TotalOrder, dom_order: &TotalOrder) -> Result<()> {
    // InstanceView performs the size checks.
    InstanceView::new(inst, var_order, dom_order).map(|_| ())
}

fn witness(name: PatternName, inst: &Instance, var_order: &TotalOrder, dom_order: &TotalOrder) -> Option<Witness> {
    let pattern = Pattern::builtin(name);
    let view = InstanceView::new(inst, var_order, dom_order).ok()?;
    let map = find_homomorphism(&pattern, &view)?;
    let labels = map
        .points
        .iter()
        .enumerate()
        .map(|(p, &t)| (pattern.point_label(p), view.point_label(t)))
        .collect();
    Some(Witness { pattern: name, map, labels })
}

fn max_by_rank(values: impl Iterator<Item = usize>, dom_order: &TotalOrder) -> Option<usize> {
    values.max_by_key(|&a| dom_order.rank(a))
}

/// The values `a_1, ..., a_n` (listed in `var_order`) with `a_1` the largest
/// value of the first variable and `a_i` the smallest, over earlier `j`, of
/// the largest value of `x_i` compatible with `a_j`. `Err(i)` names the first
/// variable (by position) at which some maximum is undefined.
pub fn emc_values(inst: &Instance, var_order: &TotalOrder, dom_order: &TotalOrder) -> std::result::Result<Vec<usize>, usize> {
    let seq = var_order.sequence();
    let mut vals: Vec<usize> = Vec::with_capacity(seq.len());
    for (i, &x) in seq.iter().enumerate() {
        let own = max_by_rank(inst.domain(x).iter().copied(), dom_order).ok_or(i)?;
        let mut best = own;
        for (j, &y) in seq[..i].iter().enumerate() {
            let aj = vals[j];
            let m = max_by_rank(inst.domain(x).iter().copied().filter(|&a| inst.compatible(y, aj, x, a)), dom_order)
                .ok_or(i)?;
            if dom_order.rank(m) < dom_order.rank(best) {
                best = m;
            }
        }
        vals.push(best);
    }
    Ok(vals)
}

fn to_assignment(inst: &Instance, var_order: &TotalOrder, vals: &[usize]) -> Assignment {
    let mut out = vec![0; inst.num_vars()];
    for (i, &x) in var_order.sequence().iter().enumerate() {
        out[x] = vals[i];
    }
    Assignment(out)
}

/// Solver for arc-consistent instances in which EMC does not occur under the
/// given orders.
pub fn solve_emc(inst: &Instance, var_order: &TotalOrder, dom_order: &TotalOrder) -> Result<SolveOutcome> {
    check_orders(inst, var_order, dom_order)?;
    let seq = var_order.sequence();
    let vals = match emc_values(inst, var_order, dom_order) {
        Ok(v) => v,
        Err(_) => return Ok(violation("not arc consistent", None, Vec::new())),
    };
    let trace: Vec<Step> = seq
        .iter()
        .zip(&vals)
        .map(|(&x, &a)| Step {
            variable: x,
            candidates: inst.domain(x).to_vec(),
            chosen: Some(a),
        })
        .collect();
    for i in 0..seq.len() {
        for j in 0..i {
            if !inst.compatible(seq[j], vals[j], seq[i], vals[i]) {
                let w = witness(PatternName::Emc, inst, var_order, dom_order);
                return Ok(violation(
                    format!(
                        "values of {} and {} are incompatible; EMC occurs",
                        inst.variable_name(seq[j]),
                        inst.variable_name(seq[i])
                    ),
                    w,
                    trace,
                ));
            }
        }
    }
    Ok(SolveOutcome {
        status: SolveStatus::Solution(to_assignment(inst, var_order, &vals)),
        trace,
    })
}

/// Solver for arc-consistent BTX-free instances: take the largest value of
/// the next variable and keep only its supports in later domains.
pub fn solve_btx(inst: &Instance, var_order: &TotalOrder, dom_order: &TotalOrder) -> Result<SolveOutcome> {
    check_orders(inst, var_order, dom_order)?;
    if !is_arc_consistent(inst) {
        return Ok(violation("not arc consistent", None, Vec::new()));
    }
    let seq = var_order.sequence();
    let mut domains: Vec<Vec<usize>> = (0..inst.num_vars()).map(|v| inst.domain(v).to_vec()).collect();
    let mut vals = Vec::with_capacity(seq.len());
    let mut trace = Vec::new();
    for (i, &x) in seq.iter().enumerate() {
        let chosen = max_by_rank(domains[x].iter().copied(), dom_order);
        trace.push(Step {
            variable: x,
            candidates: domains[x].clone(),
            chosen,
        });
        let Some(a) = chosen else {
            let w = witness(PatternName::Btx, inst, var_order, dom_order);
            return Ok(violation(
                format!("domain of {} emptied; BTX occurs", inst.variable_name(x)),
                w,
                trace,
            ));
        };
        vals.push(a);
        for &y in &seq[i + 1..] {
            domains[y].retain(|&b| inst.compatible(x, a, y, b));
        }
    }
    Ok(SolveOutcome {
        status: SolveStatus::Solution(to_assignment(inst, var_order, &vals)),
        trace,
    })
}

/// Solver for arc-consistent BTI-free instances: each variable takes its
/// largest value compatible with all earlier choices.
pub fn solve_bti(inst: &Instance, var_order: &TotalOrder, dom_order: &TotalOrder) -> Result<SolveOutcome> {
    check_orders(inst, var_order, dom_order)?;
    if !is_arc_consistent(inst) {
        return Ok(violation("not arc consistent", None, Vec::new()));
    }
    let seq = var_order.sequence();
    let mut vals: Vec<usize> = Vec::with_capacity(seq.len());
    let mut trace = Vec::new();
    for (i, &x) in seq.iter().enumerate() {
        let candidates: Vec<usize> = inst
            .domain(x)
            .iter()
            .copied()
            .filter(|&a| (0..i).all(|j| inst.compatible(seq[j], vals[j], x, a)))
            .collect();
        let chosen = max_by_rank(candidates.iter().copied(), dom_order);
        trace.push(Step {
            variable: x,
            candidates,
            chosen,
        });
        let Some(a) = chosen else {
            let w = witness(PatternName::Bti, inst, var_order, dom_order);
            return Ok(violation(
                format!("no value of {} fits the earlier choices; BTI occurs", inst.variable_name(x)),
                w,
                trace,
            ));
        };
        vals.push(a);
    }
    Ok(SolveOutcome {
        status: SolveStatus::Solution(to_assignment(inst, var_order, &vals)),
        trace,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VarPolicy {
    /// Variables in the given order.
    InOrder(TotalOrder),
    /// Declaration order.
    Declaration,
    /// Smallest current domain first, ties by declaration order.
    MinDomain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValPolicy {
    Smallest,
    Largest,
}

/// Assign, re-establish arc consistency, repeat. A wipeout after an
/// assignment is reported as a precondition violation rather than undone.
pub fn solve_mac(inst: &Instance, var_policy: &VarPolicy, val_policy: ValPolicy) -> Result<SolveOutcome> {
    if let VarPolicy::InOrder(o) = var_policy {
        if o.len() != inst.num_vars() {
            return Err(Error::InvalidOrder("variable order has the wrong length".into()));
        }
    }
    if !is_arc_consistent(inst) {
        return Ok(violation("not arc consistent", None, Vec::new()));
    }
    let n = inst.num_vars();
    let mut current = inst.clone();
    let mut assigned = vec![false; n];
    let mut trace = Vec::new();
    for step in 0..n {
        let x = match var_policy {
            VarPolicy::InOrder(o) => o.sequence()[step],
            VarPolicy::Declaration => step,
            VarPolicy::MinDomain => (0..n)
                .filter(|&v| !assigned[v])
                .min_by_key(|&v| (current.domain(v).len(), v))
                .expect("an unassigned variable remains"),
        };
        assigned[x] = true;
        let dom = current.domain(x).to_vec();
        let a = match val_policy {
            ValPolicy::Smallest => dom[0],
            ValPolicy::Largest => *dom.last().expect("non-empty domain"),
        };
        trace.push(Step {
            variable: x,
            candidates: dom,
            chosen: Some(a),
        });
        let (next, ac) = enforce_ac(&current.restrict(x, a)?);
        if ac.wipeout {
            return Ok(violation(
                format!(
                    "arc consistency wiped out after {} = {}",
                    inst.variable_name(x),
                    inst.universe().label(a)
                ),
                None,
                trace,
            ));
        }
        current = next;
    }
    let values = (0..n).map(|v| current.domain(v)[0]).collect();
    Ok(SolveOutcome {
        status: SolveStatus::Solution(Assignment(values)),
        trace,
    })
}

/// LX-free instances: arbitrary choices under maintained arc consistency.
pub fn solve_lx(inst: &Instance) -> Result<SolveOutcome> {
    let mut out = solve_mac(inst, &VarPolicy::Declaration, ValPolicy::Smallest)?;
    attach_witness(&mut out, PatternName::Lx, inst, &TotalOrder::identity(inst.num_vars()));
    Ok(out)
}

/// BTP-free instances: maintained arc consistency along the variable order.
pub fn solve_btp(inst: &Instance, var_order: &TotalOrder) -> Result<SolveOutcome> {
    let mut out = solve_mac(inst, &VarPolicy::InOrder(var_order.clone()), ValPolicy::Smallest)?;
    attach_witness(&mut out, PatternName::Btp, inst, var_order);
    Ok(out)
}

fn attach_witness(out: &mut SolveOutcome, name: PatternName, inst: &Instance, var_order: &TotalOrder) {
    if let SolveStatus::PreconditionViolated { reason, witness: w } = &mut out.status {
        if reason != "not arc consistent" {
            *w = witness(name, inst, var_order, &TotalOrder::identity(inst.universe().len()));
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverClass {
    Emc,
    Btx,
    Bti,
    Lx,
    Btp,
    Mac,
}

impl SolverClass {
    pub const ALL: [SolverClass; 6] = [
        SolverClass::Emc,
        SolverClass::Btx,
        SolverClass::Bti,
        SolverClass::Lx,
        SolverClass::Btp,
        SolverClass::Mac,
    ];

    /// The forbidden pattern defining the class; `Mac` has none.
    pub fn pattern(self) -> Option<PatternName> {
        match self {
            SolverClass::Emc => Some(PatternName::Emc),
            SolverClass::Btx => Some(PatternName::Btx),
            SolverClass::Bti => Some(PatternName::Bti),
            SolverClass::Lx => Some(PatternName::Lx),
            SolverClass::Btp => Some(PatternName::Btp),
            SolverClass::Mac => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SolverClass::Emc => "emc",
            SolverClass::Btx => "btx",
            SolverClass::Bti => "bti",
            SolverClass::Lx => "lx",
            SolverClass::Btp => "btp",
            SolverClass::Mac => "mac",
        }
    }
}

impl fmt::Display for SolverClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SolverClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SolverClass::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

/// Establishes arc consistency and runs the class solver on the result.
pub fn solve_class(class: SolverClass, inst: &Instance, var_order: &TotalOrder, dom_order: &TotalOrder) -> Result<SolveOutcome> {
    check_orders(inst, var_order, dom_order)?;
    let (ac, trace) = enforce_ac(inst);
    if trace.wipeout {
        return Ok(SolveOutcome {
            status: SolveStatus::Wipeout,
            trace: Vec::new(),
        });
    }
    match class {
        SolverClass::Emc => solve_emc(&ac, var_order, dom_order),
        SolverClass::Btx => solve_btx(&ac, var_order, dom_order),
        SolverClass::Bti => solve_bti(&ac, var_order, dom_order),
        SolverClass::Lx => solve_lx(&ac),
        SolverClass::Btp => solve_btp(&ac, var_order),
        SolverClass::Mac => solve_mac(&ac, &VarPolicy::InOrder(var_order.clone()), ValPolicy::Largest),
    }
}
