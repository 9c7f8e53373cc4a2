//! Exhaustive backtracking used as ground truth.
//!
//! Variables are assigned in declaration order and values tried in universe
//! order, so the first solution found is the lexicographically smallest one.

use crate::error::{Error, Result};
use crate::instance::{Assignment, Instance};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchResult {
    Solution(Assignment),
    Unsat,
    BudgetExceeded,
}

impl SearchResult {
    pub fn is_unsat(&self) -> bool {
        matches!(self, SearchResult::Unsat)
    }

    pub fn solution(&self) -> Option<&Assignment> {
        match self {
            SearchResult::Solution(a) => Some(a),
            _ => None,
        }
    }
}

struct Search<'a> {
    inst: &'a Instance,
    earlier: Vec<Vec<usize>>,
    values: Vec<usize>,
    nodes: u64,
    cap: u64,
}

enum Flow {
    Stop,
    Continue,
}

impl<'a> Search<'a> {
    fn new(inst: &'a Instance, cap: u64) -> Self {
        let earlier = (0..inst.num_vars())
            .map(|v| (0..v).filter(|&u| inst.has_relation(u, v)).collect())
            .collect();
        Search {
            inst,
            earlier,
            values: Vec::with_capacity(inst.num_vars()),
            nodes: 0,
            cap,
        }
    }

    /// Calls `visit` on every solution until it returns `Flow::Stop`.
    fn run(&mut self, visit: &mut dyn FnMut(&[usize]) -> Flow) -> Result<bool> {
        let v = self.values.len();
        if v == self.inst.num_vars() {
            return Ok(matches!(visit(&self.values), Flow::Stop));
        }
        for &a in self.inst.domain(v) {
            self.nodes += 1;
            if self.nodes > self.cap {
                return Err(Error::BudgetExceeded(self.cap));
            }
            let ok = self.earlier[v]
                .iter()
                .all(|&u| self.inst.compatible(u, self.values[u], v, a));
            if !ok {
                continue;
            }
            self.values.push(a);
            let stop = self.run(visit)?;
            self.values.pop();
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Finds the lexicographically first solution, or proves there is none,
/// visiting at most `cap` search nodes.
pub fn brute_force_solve(inst: &Instance, cap: u64) -> SearchResult {
    if inst.has_empty_domain() {
        return SearchResult::Unsat;
    }
    let mut found = None;
    let mut search = Search::new(inst, cap);
    let outcome = search.run(&mut |vals| {
        found = Some(Assignment(vals.to_vec()));
        Flow::Stop
    });
    match (outcome, found) {
        (Err(_), _) => SearchResult::BudgetExceeded,
        (Ok(_), Some(a)) => SearchResult::Solution(a),
        (Ok(_), None) => SearchResult::Unsat,
    }
}

/// Number of solutions, or `BudgetExceeded` once more than `cap` nodes are visited.
pub fn count_solutions(inst: &Instance, cap: u64) -> Result<u64> {
    if inst.has_empty_domain() {
        return Ok(0);
    }
    let mut count = 0u64;
    let mut search = Search::new(inst, cap);
    search.run(&mut |_| {
        count += 1;
        Flow::Continue
    })?;
    Ok(count)
}

/// Whether `a` is a solution. Values outside their domain are an error.
pub fn check_assignment(inst: &Instance, a: &Assignment) -> Result<bool> {
    if a.len() != inst.num_vars() {
        return Err(Error::Malformed(format!(
            "assignment has {} values for {} variables",
            a.len(),
            inst.num_vars()
        )));
    }
    for v in 0..inst.num_vars() {
        let val = a.value(v);
        if !inst.in_domain(v, val) {
            return Err(Error::ValueNotInDomain {
                variable: inst.variable_name(v).to_string(),
                value: if val < inst.universe().len() {
                    inst.universe().label(val)
                } else {
                    val as i64
                },
            });
        }
    }
    Ok(inst
        .constrained_pairs()
        .all(|(x, y)| inst.compatible(x, a.value(x), y, a.value(y))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::ValueUniverse;

    #[test]
    fn complete_instance_returns_first_tuple() {
        let inst = Instance::with_uniform_domains(ValueUniverse::range(4, 6), 3);
        assert_eq!(brute_force_solve(&inst, 1000), SearchResult::Solution(Assignment(vec![0, 0, 0])));
        assert_eq!(count_solutions(&inst, 1000).unwrap(), 27);
    }

    #[test]
    fn one_variable_two_values() {
        let inst = Instance::with_uniform_domains(ValueUniverse::range(0, 1), 1);
        assert_eq!(count_solutions(&inst, 10).unwrap(), 2);
    }

    #[test]
    fn budget_is_enforced() {
        let inst = Instance::with_uniform_domains(ValueUniverse::range(0, 3), 6);
        assert_eq!(brute_force_solve(&inst, 3), SearchResult::BudgetExceeded);
        assert!(matches!(count_solutions(&inst, 100), Err(Error::BudgetExceeded(100))));
    }

    #[test]
    fn checking_rejects_foreign_values() {
        let inst = Instance::new(ValueUniverse::range(0, 2), vec!["x".into()], vec![vec![0, 1]]).unwrap();
        assert!(check_assignment(&inst, &Assignment(vec![2])).is_err());
        assert!(check_assignment(&inst, &Assignment(vec![1])).unwrap());
    }
}
