//! CNF formulas in DIMACS format.

use std::fmt::Write;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: usize,
    /// Non-zero literals; `-v` is the negation of variable `v` (1-based).
    pub clauses: Vec<Vec<i32>>,
}

impl Cnf {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Cnf> {
        for c in &clauses {
            for &l in c {
                if l == 0 || l.unsigned_abs() as usize > num_vars {
                    return Err(Error::InvalidFormula(format!("literal {l} out of range 1..={num_vars}")));
                }
            }
        }
        Ok(Cnf { num_vars, clauses })
    }

    /// `assignment[v - 1]` is the value of variable `v`.
    pub fn is_satisfied(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter()
                .any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0))
        })
    }

    /// All satisfying assignments, by brute force, in binary counting order.
    pub fn satisfying_assignments(&self) -> Vec<Vec<bool>> {
        assert!(self.num_vars < 25, "brute force over too many variables");
        (0u32..1 << self.num_vars)
            .map(|bits| (0..self.num_vars).map(|v| bits >> v & 1 == 1).collect::<Vec<bool>>())
            .filter(|a| self.is_satisfied(a))
            .collect()
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                write!(out, "{l} ").expect("write to string");
            }
            out.push_str("0\n");
        }
        out
    }
}

/// Parses DIMACS CNF: `c` comment lines, a `p cnf <vars> <clauses>` header,
/// then zero-terminated clauses that may span lines. A trailing `%` line ends
/// the input.
pub fn parse_dimacs(text: &str) -> Result<Cnf> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if header.is_some() || parts.len() != 4 || parts[1] != "cnf" {
                return Err(Error::InvalidFormula(format!("bad header `{line}`")));
            }
            let n = parts[2].parse().map_err(|_| Error::InvalidFormula(format!("bad variable count in `{line}`")))?;
            let m = parts[3].parse().map_err(|_| Error::InvalidFormula(format!("bad clause count in `{line}`")))?;
            header = Some((n, m));
            continue;
        }
        if header.is_none() {
            return Err(Error::InvalidFormula("clause before `p cnf` header".into()));
        }
        for tok in line.split_whitespace() {
            let l: i32 = tok.parse().map_err(|_| Error::InvalidFormula(format!("bad literal `{tok}`")))?;
            if l == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(l);
            }
        }
    }
    let (n, m) = header.ok_or_else(|| Error::InvalidFormula("missing `p cnf` header".into()))?;
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != m {
        return Err(Error::InvalidFormula(format!("header announces {m} clauses, found {}", clauses.len())));
    }
    Cnf::new(n, clauses)
}
