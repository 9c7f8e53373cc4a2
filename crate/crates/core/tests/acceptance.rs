//! One line per acceptance criterion; exits non-zero if any fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use ac_patterns::ac::{enforce_ac, is_arc_consistent};
use ac_patterns::catalog::{catalog_instance, fig13_table, CatalogName};
use ac_patterns::classify::{classify, Classification};
use ac_patterns::enumerate::enumerate_simple_patterns;
use ac_patterns::generate::gen_pattern_free_instance;
use ac_patterns::occurrence::{consistent_linear_extensions, in_class, occurs, occurs_in_instance, DEFAULT_ORDER_CAP};
use ac_patterns::oracle::{brute_force_solve, check_assignment, count_solutions};
use ac_patterns::pattern::PatternName;
use ac_patterns::recognition::dimacs::Cnf;
use ac_patterns::recognition::gadget::{assignment_to_order, gen_gadget};
use ac_patterns::recognition::{collect_var_order_witnesses, exhaustive_var_order, find_var_order, OrderingConstraint, RecognitionTarget};
use ac_patterns::solvers::{emc_values, solve_class, SolverClass};
use ac_patterns::{Instance, Pattern, TotalOrder};
use common::seeded_instance;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

struct Report {
    ok: bool,
    detail: String,
}

fn report(ok: bool, detail: impl Into<String>) -> Report {
    Report { ok, detail: detail.into() }
}

fn within(ok: bool, elapsed: Duration, budget: Duration, detail: String) -> Report {
    let timed = elapsed <= budget;
    report(ok && timed, format!("{detail}; {:.1}s of {}s budget", elapsed.as_secs_f64(), budget.as_secs()))
}

fn catalogue() -> Report {
    let t = Instant::now();
    let bad: Vec<String> = CatalogName::ALL
        .into_iter()
        .filter(|&n| {
            let inst = catalog_instance(n).instance;
            !is_arc_consistent(&inst) || count_solutions(&inst, u64::MAX) != Ok(0)
        })
        .map(|n| n.to_string())
        .collect();
    within(bad.is_empty(), t.elapsed(), Duration::from_secs(5), format!("7 instances, failing {bad:?}"))
}

fn table() -> Report {
    let t = Instant::now();
    let rows = fig13_table();
    let mut bad = Vec::new();
    for &(p, i) in &rows {
        let c = catalog_instance(i);
        let pat = Pattern::builtin(p);
        let some = matches!(in_class(&pat, &c.instance, DEFAULT_ORDER_CAP), Ok(Some(_)));
        let canonical = occurs_in_instance(&pat, &c.instance, &c.canonical_var_order, &c.canonical_dom_order) == Ok(false);
        if !some || !canonical {
            bad.push(format!("{p}/{i}"));
        }
    }
    within(rows.len() == 19 && bad.is_empty(), t.elapsed(), Duration::from_secs(60), format!("{} rows, failing {bad:?}", rows.len()))
}

/// Every decision in the trace is final: one step per variable, each with a
/// chosen value.
fn backtrack_free(out: &ac_patterns::solvers::SolveOutcome, n: usize) -> bool {
    let vars: BTreeSet<usize> = out.trace.iter().map(|s| s.variable).collect();
    out.trace.len() == n && vars.len() == n && out.trace.iter().all(|s| s.chosen.is_some())
}

fn decision() -> Report {
    let classes = [SolverClass::Emc, SolverClass::Btx, SolverClass::Bti, SolverClass::Lx, SolverClass::Btp];
    let mut lines = Vec::new();
    let mut ok = true;
    for class in classes {
        let t = Instant::now();
        let pat = Pattern::builtin(class.pattern().expect("class pattern"));
        let stats: Vec<(bool, bool)> = (0..500u64)
            .into_par_iter()
            .map(|seed| {
                let n = 3 + (seed % 4) as usize;
                let d = 2 + (seed / 4 % 3) as usize;
                let density = 0.3 + 0.1 * (seed / 12 % 6) as f64;
                let (inst, vo, dord) = gen_pattern_free_instance(&pat, n, d, density, seed).expect("generator");
                let wipeout = enforce_ac(&inst).1.wipeout;
                let unsat = brute_force_solve(&inst, u64::MAX).is_unsat();
                let out = solve_class(class, &inst, &vo, &dord).expect("solver");
                let good = if wipeout {
                    unsat && out.solution().is_none()
                } else {
                    !unsat
                        && out.solution().is_some_and(|a| check_assignment(&inst, a) == Ok(true))
                        && backtrack_free(&out, n)
                };
                (good, wipeout)
            })
            .collect();
        let failures = stats.iter().filter(|s| !s.0).count();
        let wipeouts = stats.iter().filter(|s| s.1).count();
        let elapsed = t.elapsed();
        ok &= failures == 0 && wipeouts > 0 && wipeouts < stats.len() && elapsed <= Duration::from_secs(300);
        lines.push(format!("{class}: 500 instances, {wipeouts} wipeouts, {failures} failures, {:.1}s", elapsed.as_secs_f64()));
    }
    report(ok, lines.join("; "))
}

fn prefix_locality() -> Report {
    let emc = Pattern::builtin(PatternName::Emc);
    let mut checked = 0;
    let mut bad = Vec::new();
    let mut seed = 0u64;
    while checked < 100 {
        let (inst, vo, dord) = gen_pattern_free_instance(&emc, 6, 4, 0.6, seed).expect("generator");
        seed += 1;
        let (ac, trace) = enforce_ac(&inst);
        if trace.wipeout {
            continue;
        }
        checked += 1;
        let Ok(full) = emc_values(&ac, &vo, &dord) else {
            bad.push(seed - 1);
            continue;
        };
        for i in 1..=6 {
            let sub = ac.subinstance(&vo.sequence()[..i]);
            if emc_values(&sub, &TotalOrder::identity(i), &dord).ok().as_deref() != Some(&full[..i]) {
                bad.push(seed - 1);
                break;
            }
        }
    }
    report(bad.is_empty(), format!("{checked} non-wipeout instances from {seed} seeds, failing seeds {bad:?}"))
}

fn recognition_corpus() -> Vec<Instance> {
    let mut out: Vec<Instance> = (0..200u64)
        .map(|s| seeded_instance(2 + (s % 5) as usize, 1 + (s / 5 % 3) as usize, 0.3 + 0.1 * (s / 15 % 6) as f64, 1000 + s))
        .collect();
    out.extend(CatalogName::ALL.into_iter().map(|n| catalog_instance(n).instance));
    out
}

fn recognition(corpus: &[Instance]) -> Report {
    let t = Instant::now();
    let results: Vec<(usize, RecognitionTarget, bool, bool)> = corpus
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, inst)| {
            let dord = TotalOrder::identity(inst.universe().len());
            RecognitionTarget::ALL.into_iter().map(move |t| {
                let fast = find_var_order(inst, t, &dord).expect("search");
                let slow = exhaustive_var_order(inst, t, &dord).expect("exhaustion");
                let certified = fast
                    .as_ref()
                    .map_or(true, |o| occurs_in_instance(&t.pattern(), inst, o, &dord) == Ok(false));
                (i, t, fast.is_some() == slow.is_some() && certified, fast.is_some())
            })
        })
        .collect();
    let bad: Vec<String> = results.iter().filter(|r| !r.2).map(|r| format!("#{} {}", r.0, r.1)).collect();
    let mut found = BTreeMap::new();
    for r in &results {
        let e = found.entry(r.1.as_str()).or_insert((0, 0));
        if r.3 { e.0 += 1 } else { e.1 += 1 }
    }
    let both = found.values().all(|&(y, n)| y > 0 && n > 0);
    within(
        bad.is_empty() && both,
        t.elapsed(),
        Duration::from_secs(600),
        format!("{} instances x 4 targets, found/none {found:?}, failing {bad:?}", corpus.len()),
    )
}

fn closure(corpus: &[Instance]) -> Report {
    let mut emitted: Vec<(RecognitionTarget, OrderingConstraint, usize)> = Vec::new();
    for inst in corpus {
        let dord = TotalOrder::identity(inst.universe().len());
        for t in RecognitionTarget::ALL {
            let op = collect_var_order_witnesses(inst, t, &dord).expect("witnesses");
            emitted.extend(op.constraints.into_iter().map(|c| (t, c, inst.num_vars())));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut violations = 0;
    let mut sampled = 0;
    while sampled < 10_000 && !emitted.is_empty() {
        let (t, c, n) = &emitted[rng.gen_range(0..emitted.len())];
        let k = c.scope().len();
        let draw = |rng: &mut ChaCha8Rng| loop {
            let v: Vec<usize> = (0..k).map(|_| rng.gen_range(0..*n)).collect();
            if c.holds_on_scope(&v) {
                break v;
            }
        };
        let (s, u) = (draw(&mut rng), draw(&mut rng));
        let combined: Vec<usize> =
            s.iter().zip(&u).map(|(&a, &b)| if *t == RecognitionTarget::Btp { a.max(b) } else { a.min(b) }).collect();
        violations += usize::from(!c.holds_on_scope(&combined));
        sampled += 1;
    }
    report(
        sampled == 10_000 && violations == 0,
        format!("{} emitted constraints, {sampled} pairs, {violations} violations", emitted.len()),
    )
}

fn gadget_fidelity() -> Report {
    let t = Instant::now();
    let emc = Pattern::builtin(PatternName::Emc);
    let phi = Cnf::new(3, vec![vec![1, 2, 3]]).expect("formula");
    let all8: Vec<Vec<i32>> =
        (0..8).map(|s: i32| (1..=3).map(|v| if s >> (v - 1) & 1 == 1 { -v } else { v }).collect()).collect();
    let phi_unsat = Cnf::new(3, all8).expect("formula");
    let mut lines = Vec::new();
    let mut ok = true;
    for (label, cnf) in [("phi", &phi), ("phi'", &phi_unsat)] {
        let g = gen_gadget(RecognitionTarget::Emc, cnf).expect("gadget");
        let vo = g.var_order.clone().expect("fixed order");
        let (mut sat, mut good) = (0, 0);
        for bits in 0..8u32 {
            let a: Vec<bool> = (0..3).map(|v| bits >> v & 1 == 1).collect();
            let o = assignment_to_order(cnf, &a, &g.meta).expect("order");
            let occ = occurs_in_instance(&emc, &g.instance, &vo, &o).expect("occurrence");
            let s = cnf.is_satisfied(&a);
            sat += usize::from(s);
            good += usize::from(occ != s);
        }
        ok &= good == 8;
        lines.push(format!("{label}: {sat} satisfying, {good}/8 assignments match"));
    }
    within(ok, t.elapsed(), Duration::from_secs(120), lines.join(", "))
}

fn simple_pattern_classification() -> Report {
    let t = Instant::now();
    let patterns = enumerate_simple_patterns(3, 2, 2);
    let verdicts: Vec<(Vec<u32>, &'static str, bool)> = patterns
        .par_iter()
        .map(|p| {
            let c = classify(p).expect("classify");
            let certified = match &c {
                Classification::AcSolvable { maximal, occurrence } => {
                    let exts = consistent_linear_extensions(&maximal.pattern);
                    match occurrence {
                        ac_patterns::occurrence::OccurrenceResult::Occurs { witnesses } => {
                            witnesses.len() == exts.len() && witnesses.iter().all(|(e, h)| h.verify(p, e))
                        }
                        _ => false,
                    }
                }
                Classification::NotAcSolvable { instance, var_order, dom_order } => {
                    let inst = catalog_instance(*instance).instance;
                    occurs_in_instance(p, &inst, var_order, dom_order) == Ok(false)
                }
                _ => false,
            };
            (p.canonical_form(), c.verdict(), certified)
        })
        .collect();
    let by_form: BTreeMap<&[u32], &str> = verdicts.iter().map(|(f, v, _)| (f.as_slice(), *v)).collect();
    let uncertified = verdicts.iter().filter(|v| !v.2).count();
    let positive = verdicts.iter().filter(|v| v.1 == "ac-solvable").count();
    let asymmetric = patterns
        .par_iter()
        .zip(&verdicts)
        .filter(|(p, (_, v, _))| {
            [p.inv_dom(), p.inv_var()].iter().any(|q| by_form.get(q.canonical_form().as_slice()) != Some(v))
        })
        .count();
    within(
        !patterns.is_empty() && uncertified == 0 && asymmetric == 0 && positive > 0 && positive < patterns.len(),
        t.elapsed(),
        Duration::from_secs(1800),
        format!(
            "{} patterns, {positive} ac-solvable, {} not, {uncertified} without certificate, {asymmetric} asymmetric",
            patterns.len(),
            patterns.len() - positive
        ),
    )
}

fn occurrence_facts() -> Report {
    let t = Instant::now();
    let b = |n| Pattern::builtin(n);
    let facts = [
        ("(MC,EMC)", occurs(&b(PatternName::Mc), &b(PatternName::Emc)).occurs(), true),
        ("(MC,BTP)", occurs(&b(PatternName::Mc), &b(PatternName::Btp)).occurs(), false),
        ("(MC,BTX)", occurs(&b(PatternName::Mc), &b(PatternName::Btx)).occurs(), false),
        ("(Q,P)", occurs(&b(PatternName::Q), &b(PatternName::P)).occurs(), true),
        ("(P,Q)", occurs(&b(PatternName::P), &b(PatternName::Q)).occurs(), false),
        ("(Q,V_gt)", occurs(&b(PatternName::Q), &b(PatternName::VGt)).occurs(), true),
    ];
    let bad: Vec<&str> = facts.iter().filter(|f| f.1 != f.2).map(|f| f.0).collect();
    within(bad.is_empty(), t.elapsed(), Duration::from_secs(1), format!("6 facts, failing {bad:?}"))
}

fn main() {
    let corpus = recognition_corpus();
    let criteria: Vec<(&str, Box<dyn Fn() -> Report + '_>)> = vec![
        ("catalogue instances are AC and unsatisfiable", Box::new(catalogue)),
        ("table pairs are certified", Box::new(table)),
        ("AC decides pattern-free classes without backtracking", Box::new(decision)),
        ("EMC prefix locality", Box::new(prefix_locality)),
        ("variable-order search matches exhaustion", Box::new(|| recognition(&corpus))),
        ("emitted ordering constraints are closed", Box::new(|| closure(&corpus))),
        ("EMC gadget fidelity", Box::new(gadget_fidelity)),
        ("classification of (3,2,2) simple patterns", Box::new(simple_pattern_classification)),
        ("occurrence facts", Box::new(occurrence_facts)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let r = run();
        failed += usize::from(!r.ok);
        println!("criterion {}: {} {name}: {}", i + 1, if r.ok { "PASS" } else { "FAIL" }, r.detail);
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
