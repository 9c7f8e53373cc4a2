mod common;

use ac_patterns::ac::enforce_ac;
use ac_patterns::catalog::{catalog_instance, CatalogName};
use ac_patterns::generate::gen_pattern_free_instance;
use ac_patterns::occurrence::{occurs_in_instance, InstanceView};
use ac_patterns::oracle::{brute_force_solve, check_assignment};
use ac_patterns::order::permutations;
use ac_patterns::pattern::PatternName;
use ac_patterns::solvers::*;
use ac_patterns::{Instance, Pattern, TotalOrder, ValueUniverse};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ids(inst: &Instance) -> (TotalOrder, TotalOrder) {
    (TotalOrder::identity(inst.num_vars()), TotalOrder::identity(inst.universe().len()))
}

#[test]
fn complete_instances_get_all_maxima() {
    let inst = Instance::with_uniform_domains(ValueUniverse::range(1, 4), 5);
    let (vo, dord) = ids(&inst);
    for solve in [solve_emc, solve_btx, solve_bti] {
        let out = solve(&inst, &vo, &dord).unwrap();
        assert_eq!(out.solution().unwrap().0, vec![3; 5]);
        assert_eq!(out.backtracks(), 0);
    }
    for class in [SolverClass::Lx, SolverClass::Btp, SolverClass::Mac] {
        assert!(solve_class(class, &inst, &vo, &dord).unwrap().solution().is_some());
    }
}

/// Relations of the form `y >= f(x)` are max-closed, so MC cannot occur.
fn max_closed_instance(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = 4;
    let mut inst = Instance::with_uniform_domains(ValueUniverse::range(0, d - 1), 5);
    for x in 0..5 {
        for y in x + 1..5 {
            let f: Vec<i64> = (0..d).map(|_| rng.gen_range(0..d)).collect();
            inst.add_constraint_fn(x, y, |a, b| b >= f[a as usize]).unwrap();
        }
    }
    inst
}

#[test]
fn max_closed_instances_are_solved_by_the_emc_solver() {
    let mc = Pattern::builtin(PatternName::Mc);
    for seed in 0..30 {
        let inst = max_closed_instance(seed);
        let (vo, dord) = ids(&inst);
        assert!(!occurs_in_instance(&mc, &inst, &vo, &dord).unwrap());
        let out = solve_class(SolverClass::Emc, &inst, &vo, &dord).unwrap();
        let a = out.solution().expect("max-closed instances have a solution after AC");
        assert!(check_assignment(&inst, a).unwrap());
    }
}

#[test]
fn i_k4_violates_btx_under_every_order_pair() {
    let inst = catalog_instance(CatalogName::IK4).instance;
    let btx = Pattern::builtin(PatternName::Btx);
    for vp in permutations(4) {
        for dp in permutations(3) {
            let vo = TotalOrder::from_sequence(vp.clone()).unwrap();
            let dord = TotalOrder::from_sequence(dp).unwrap();
            let out = solve_btx(&inst, &vo, &dord).unwrap();
            match &out.status {
                SolveStatus::PreconditionViolated { witness: Some(w), .. } => {
                    assert_eq!(w.pattern, PatternName::Btx);
                    let view = InstanceView::new(&inst, &vo, &dord).unwrap();
                    assert!(w.map.verify(&btx, &view));
                }
                other => panic!("{other:?}"),
            }
        }
    }
}

#[test]
fn i_2col_3_violates_bti_under_every_order_pair() {
    let inst = catalog_instance(CatalogName::I2Col3).instance;
    for vp in permutations(3) {
        for dp in permutations(2) {
            let vo = TotalOrder::from_sequence(vp.clone()).unwrap();
            let dord = TotalOrder::from_sequence(dp).unwrap();
            assert!(solve_bti(&inst, &vo, &dord).unwrap().is_violation());
        }
    }
}

fn bfs_order(inst: &Instance, root: usize) -> TotalOrder {
    let nb = inst.neighbours();
    let mut seen = vec![false; inst.num_vars()];
    let mut order = vec![root];
    seen[root] = true;
    let mut i = 0;
    while i < order.len() {
        for &w in &nb[order[i]] {
            if !seen[w] {
                seen[w] = true;
                order.push(w);
            }
        }
        i += 1;
    }
    TotalOrder::from_sequence(order).unwrap()
}

#[test]
fn trees_are_solved_by_the_btp_solver_from_any_root() {
    let mut solved = 0;
    for seed in 0..200 {
        let inst = random_tree(6, 3, seed);
        let (ac, trace) = enforce_ac(&inst);
        if trace.wipeout {
            assert!(brute_force_solve(&inst, u64::MAX).is_unsat());
            continue;
        }
        let root = (seed % 6) as usize;
        let out = solve_btp(&ac, &bfs_order(&ac, root)).unwrap();
        let a = out.solution().unwrap_or_else(|| panic!("seed {seed}: {:?}", out.status));
        assert!(check_assignment(&inst, a).unwrap());
        solved += 1;
    }
    assert!(solved > 50, "only {solved} trees survived arc consistency");
}

#[test]
fn mac_solves_lx_free_instances_under_any_policy() {
    let lx = Pattern::builtin(PatternName::Lx);
    let mut solved = 0;
    for seed in 0..60 {
        let (inst, _, _) = gen_pattern_free_instance(&lx, 5, 3, 0.5, seed).unwrap();
        let (ac, trace) = enforce_ac(&inst);
        let unsat = brute_force_solve(&inst, u64::MAX).is_unsat();
        assert_eq!(trace.wipeout, unsat, "seed {seed}");
        if unsat {
            continue;
        }
        let random = TotalOrder::from_sequence({
            use rand::seq::SliceRandom;
            let mut v: Vec<usize> = (0..5).collect();
            v.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            v
        })
        .unwrap();
        for (vp, val) in [
            (VarPolicy::Declaration, ValPolicy::Smallest),
            (VarPolicy::MinDomain, ValPolicy::Largest),
            (VarPolicy::InOrder(random), ValPolicy::Largest),
        ] {
            let out = solve_mac(&ac, &vp, val).unwrap();
            assert!(check_assignment(&inst, out.solution().unwrap()).unwrap(), "seed {seed}");
        }
        solved += 1;
    }
    assert!(solved > 0);
}

#[test]
fn emc_values_depend_only_on_the_prefix() {
    let emc = Pattern::builtin(PatternName::Emc);
    for seed in 0..40 {
        let (inst, vo, dord) = gen_pattern_free_instance(&emc, 5, 4, 0.6, seed).unwrap();
        let (ac, trace) = enforce_ac(&inst);
        if trace.wipeout {
            continue;
        }
        let full = emc_values(&ac, &vo, &dord).unwrap();
        for i in 1..=5 {
            let sub = ac.subinstance(&vo.sequence()[..i]);
            let prefix = emc_values(&sub, &TotalOrder::identity(i), &dord).unwrap();
            assert_eq!(prefix[..], full[..i], "seed {seed}, prefix {i}");
        }
    }
}

#[test]
fn non_ac_input_is_flagged() {
    let mut inst = Instance::new(ValueUniverse::range(1, 2), vec!["x".into(), "y".into()], vec![vec![1, 2], vec![1]]).unwrap();
    inst.add_constraint_fn(0, 1, |a, b| (a, b) == (1, 1)).unwrap();
    let (vo, dord) = ids(&inst);
    for solve in [solve_emc, solve_btx, solve_bti] {
        match solve(&inst, &vo, &dord).unwrap().status {
            SolveStatus::PreconditionViolated { reason, .. } => assert_eq!(reason, "not arc consistent"),
            other => panic!("{other:?}"),
        }
    }
}
