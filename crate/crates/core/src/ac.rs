//! AC-3 arc consistency with a removal trace.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::instance::Instance;

/// One value deletion: `value` (a universe index) left the domain of
/// `variable` because it had no support at `blame`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Removal {
    pub variable: usize,
    pub value: usize,
    pub blame: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AcTrace {
    pub removals: Vec<Removal>,
    pub wipeout: bool,
}

impl AcTrace {
    pub fn is_empty(&self) -> bool {
        self.removals.is_empty() && !self.wipeout
    }
}

/// Enforces arc consistency. The result is arc consistent unless the trace
/// reports a wipeout, in which case some domain is empty.
pub fn enforce_ac(inst: &Instance) -> (Instance, AcTrace) {
    let arcs = initial_arcs(inst);
    run_ac3(inst, arcs)
}

/// Same fixpoint as [`enforce_ac`] but with the initial revision queue
/// shuffled by `seed`; used to exercise confluence.
pub fn enforce_ac_shuffled(inst: &Instance, seed: u64) -> (Instance, AcTrace) {
    let mut arcs = initial_arcs(inst);
    arcs.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    run_ac3(inst, arcs)
}

fn initial_arcs(inst: &Instance) -> Vec<(usize, usize)> {
    let mut arcs = Vec::new();
    for (x, y) in inst.constrained_pairs() {
        arcs.push((x, y));
        arcs.push((y, x));
    }
    arcs.sort_unstable();
    arcs
}

fn run_ac3(inst: &Instance, arcs: Vec<(usize, usize)>) -> (Instance, AcTrace) {
    let mut out = inst.clone();
    let mut trace = AcTrace::default();
    if out.has_empty_domain() {
        trace.wipeout = true;
        return (out, trace);
    }
    let neighbours = inst.neighbours();
    let n = inst.num_vars();
    let mut queued = vec![vec![false; n]; n];
    let mut queue: VecDeque<(usize, usize)> = VecDeque::with_capacity(arcs.len());
    for (x, y) in arcs {
        if !queued[x][y] {
            queued[x][y] = true;
            queue.push_back((x, y));
        }
    }
    while let Some((x, y)) = queue.pop_front() {
        queued[x][y] = false;
        let before = out.domain(x).to_vec();
        let kept: Vec<usize> = before
            .iter()
            .copied()
            .filter(|&a| out.domain(y).iter().any(|&b| out.compatible(x, a, y, b)))
            .collect();
        if kept.len() == before.len() {
            continue;
        }
        for &a in before.iter().filter(|a| !kept.contains(a)) {
            trace.removals.push(Removal {
                variable: x,
                value: a,
                blame: y,
            });
        }
        let empty = kept.is_empty();
        out.set_domain(x, kept);
        if empty {
            trace.wipeout = true;
            return (out, trace);
        }
        for &z in &neighbours[x] {
            if z != y && !queued[z][x] {
                queued[z][x] = true;
                queue.push_back((z, x));
            }
        }
    }
    (out, trace)
}

/// Every value has a support at every other variable. Empty domains make an
/// instance not arc consistent.
pub fn is_arc_consistent(inst: &Instance) -> bool {
    if inst.has_empty_domain() {
        return false;
    }
    inst.constrained_pairs().all(|(x, y)| {
        supported(inst, x, y) && supported(inst, y, x)
    })
}

fn supported(inst: &Instance, x: usize, y: usize) -> bool {
    inst.domain(x)
        .iter()
        .all(|&a| inst.domain(y).iter().any(|&b| inst.compatible(x, a, y, b)))
}
