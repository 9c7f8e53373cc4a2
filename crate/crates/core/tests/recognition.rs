mod common;

use ac_patterns::ac::{enforce_ac, is_arc_consistent};
use ac_patterns::catalog::{catalog_instance, CatalogName};
use ac_patterns::occurrence::occurs_in_instance;
use ac_patterns::order::permutations;
use ac_patterns::recognition::dimacs::Cnf;
use ac_patterns::recognition::gadget::{assignment_to_order, gen_gadget};
use ac_patterns::recognition::*;
use ac_patterns::{Error, Instance, TotalOrder, ValueUniverse};
use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ident_dom(inst: &Instance) -> TotalOrder {
    TotalOrder::identity(inst.universe().len())
}

fn all_orders(n: usize) -> Vec<TotalOrder> {
    permutations(n).into_iter().map(|p| TotalOrder::from_sequence(p).unwrap()).collect()
}

#[test]
fn instances_without_witnesses_give_empty_problems() {
    let inst = Instance::with_uniform_domains(ValueUniverse::range(1, 3), 4);
    for t in RecognitionTarget::ALL {
        assert!(collect_var_order_witnesses(&inst, t, &ident_dom(&inst)).unwrap().constraints.is_empty());
    }
}

#[test]
fn i_k4_has_no_btx_free_variable_order() {
    let inst = catalog_instance(CatalogName::IK4).instance;
    let op = collect_var_order_witnesses(&inst, RecognitionTarget::Btx, &ident_dom(&inst)).unwrap();
    assert!(!op.constraints.is_empty());
    assert_eq!(solve_ordering(&op).unwrap(), None);
    assert!(all_orders(4).iter().all(|o| !op.satisfied_by(o)));
}

/// y = x1 with alpha = 2 > beta = 1, x = x2 with eps = 1, z = x3 with
/// gamma = 2 and delta = 1.
fn one_btx_witness() -> Instance {
    let mut inst = Instance::new(
        ValueUniverse::range(1, 2),
        vec!["x1".into(), "x2".into(), "x3".into()],
        vec![vec![1, 2], vec![1], vec![1, 2]],
    )
    .unwrap();
    inst.add_constraint_fn(0, 2, |a, c| (a, c) != (2, 2)).unwrap();
    inst.add_constraint_fn(1, 2, |_, c| c == 2).unwrap();
    inst
}

#[test]
fn single_btx_witness_gives_single_min_constraint() {
    let inst = one_btx_witness();
    let op = collect_var_order_witnesses(&inst, RecognitionTarget::Btx, &ident_dom(&inst)).unwrap();
    let expected: Vec<OrderingConstraint> = vec![OrderingConstraint::min(0, 1, 2)];
    assert_eq!(op.constraints.into_iter().collect::<Vec<_>>(), expected);
}

#[test]
fn min_constraint_solution_matches_enumeration() {
    let mut op = OrderingProblem::new(3);
    op.constraints.insert(OrderingConstraint::min(0, 1, 2));
    let good: Vec<TotalOrder> = all_orders(3).into_iter().filter(|o| op.satisfied_by(o)).collect();
    assert_eq!(good.len(), 4);
    let o = solve_ordering(&op).unwrap().unwrap();
    assert!(good.contains(&o));
    assert_ne!(o.sequence()[0], 0);
    assert_eq!(solve_ordering(&OrderingProblem::new(3)).unwrap(), Some(TotalOrder::identity(3)));
}

#[test]
fn trees_have_btp_free_orders() {
    for seed in 0..50 {
        let inst = random_tree(6, 3, seed);
        let o = find_var_order(&inst, RecognitionTarget::Btp, &ident_dom(&inst)).unwrap().expect("trees are BTP-free");
        assert!(!occurs_in_instance(&RecognitionTarget::Btp.pattern(), &inst, &o, &ident_dom(&inst)).unwrap());
    }
}

#[test]
fn i_k4_has_no_emc_free_order_for_any_domain_order() {
    let inst = catalog_instance(CatalogName::IK4).instance;
    for dord in all_orders(3) {
        assert_eq!(find_var_order(&inst, RecognitionTarget::Emc, &dord).unwrap(), None);
        assert_eq!(exhaustive_var_order(&inst, RecognitionTarget::Emc, &dord).unwrap(), None);
    }
}

#[test]
fn single_constraint_identity_order_works_for_every_target() {
    let mut inst = Instance::with_uniform_domains(ValueUniverse::range(1, 3), 4);
    inst.add_constraint_fn(0, 2, |a, b| a < b).unwrap();
    let (vo, dord) = (TotalOrder::identity(4), ident_dom(&inst));
    for t in RecognitionTarget::ALL {
        assert!(!occurs_in_instance(&t.pattern(), &inst, &vo, &dord).unwrap(), "{t}");
        assert!(find_var_order(&inst, t, &dord).unwrap().is_some(), "{t}");
    }
}

#[test]
fn no_witness_gives_universe_order() {
    let inst = Instance::with_uniform_domains(ValueUniverse::range(1, 4), 3);
    for t in [RecognitionTarget::Bti, RecognitionTarget::Btx] {
        assert_eq!(find_dom_order(&inst, t, &TotalOrder::identity(3)).unwrap(), Some(TotalOrder::identity(4)));
    }
}

#[test]
fn single_bti_witness_forces_one_value_order() {
    // y = x1 with values 1 and 2, x = x2 (value 1) before z = x3 (values 1, 2).
    // The occurrence uses alpha = 2, beta = 1 and needs 2 above 1.
    let inst = one_btx_witness();
    let vo = TotalOrder::from_sequence(vec![0, 1, 2]).unwrap();
    let p = RecognitionTarget::Bti.pattern();
    let avoiding: Vec<TotalOrder> =
        all_orders(2).into_iter().filter(|o| !occurs_in_instance(&p, &inst, &vo, o).unwrap()).collect();
    assert_eq!(avoiding, vec![TotalOrder::from_sequence(vec![1, 0]).unwrap()]);
    let found = find_dom_order(&inst, RecognitionTarget::Bti, &vo).unwrap().unwrap();
    assert!(found.less(1, 0));
}

#[test]
fn domain_order_search_is_refused_for_emc_and_btp() {
    let inst = one_btx_witness();
    for t in [RecognitionTarget::Emc, RecognitionTarget::Btp] {
        assert!(matches!(find_dom_order(&inst, t, &TotalOrder::identity(3)), Err(Error::UnknownName(_))));
    }
}

#[test]
fn mixed_closure_families_are_rejected() {
    let mut op = OrderingProblem::new(3);
    op.constraints.insert(OrderingConstraint::min(0, 1, 2));
    op.constraints.insert(OrderingConstraint::max(0, 1, 2));
    assert_eq!(solve_ordering(&op), Err(Error::MixedClosure));
}

fn random_cnf(n: usize, m: usize, seed: u64) -> Cnf {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let clauses = (0..m)
        .map(|_| {
            let mut vars: Vec<i32> = (1..=n as i32).collect();
            for i in 0..3 {
                let j = rng.gen_range(i..vars.len());
                vars.swap(i, j);
            }
            vars[..3].iter().map(|&v| if rng.gen_bool(0.5) { v } else { -v }).collect()
        })
        .collect();
    Cnf::new(n, clauses).unwrap()
}

#[test]
fn gadgets_are_arc_consistent_with_expected_sizes() {
    for seed in 0..10 {
        let cnf = random_cnf(4, 1 + (seed % 3) as usize, seed);
        for t in [RecognitionTarget::Emc, RecognitionTarget::Btx, RecognitionTarget::Bti] {
            let g = gen_gadget(t, &cnf).unwrap();
            let n_csp = 6 * cnf.clauses.len();
            assert_eq!(g.instance.num_vars(), n_csp);
            assert!((0..n_csp).all(|v| g.instance.domain(v).len() == 2 * cnf.num_vars + 4));
            assert!(is_arc_consistent(&g.instance));
            assert!(enforce_ac(&g.instance).1.is_empty());
            let copies = if t == RecognitionTarget::Btx { 9 } else { 3 };
            assert_eq!(g.meta.edges.len(), copies * cnf.clauses.len());
            assert_eq!(g.var_order.is_some(), t == RecognitionTarget::Emc);
        }
    }
    assert!(gen_gadget(RecognitionTarget::Btp, &random_cnf(3, 1, 0)).is_err());
}

#[test]
fn emc_gadget_demands_form_a_blocking_cycle() {
    let cnf = random_cnf(5, 3, 9);
    let g = gen_gadget(RecognitionTarget::Emc, &cnf).unwrap();
    for ds in &g.meta.disjuncts {
        let demands: Vec<(usize, usize)> = ds.iter().map(|&(_, lo, hi)| (lo, hi)).collect();
        let values = {
            let mut v: Vec<usize> = demands.iter().map(|d| d.0).collect();
            v.sort();
            v
        };
        let met = |perm: &[usize], d: (usize, usize)| {
            let pos = |x| perm.iter().position(|&y| values[y] == x).unwrap();
            pos(d.0) > pos(d.1)
        };
        let perms = permutations(3);
        assert!(perms.iter().all(|p| !demands.iter().all(|&d| met(p, d))));
        for skip in 0..3 {
            assert!(perms.iter().any(|p| demands.iter().enumerate().all(|(k, &d)| k == skip || met(p, d))));
        }
    }
}

#[test]
fn emc_gadget_follows_satisfiability_on_random_formulas() {
    let emc = RecognitionTarget::Emc.pattern();
    for seed in 0..6 {
        let cnf = random_cnf(4, 2, seed);
        let g = gen_gadget(RecognitionTarget::Emc, &cnf).unwrap();
        let vo = g.var_order.clone().unwrap();
        for bits in 0..16u32 {
            let a: Vec<bool> = (0..4).map(|v| bits >> v & 1 == 1).collect();
            let o = assignment_to_order(&cnf, &a, &g.meta).unwrap();
            let occ = occurs_in_instance(&emc, &g.instance, &vo, &o).unwrap();
            assert_eq!(occ, !cnf.is_satisfied(&a), "seed {seed}, assignment {a:?}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn variable_order_search_agrees_with_exhaustion(n in 2usize..=5, d in 1usize..=3, dens in 0.2..0.9f64, seed in any::<u64>()) {
        let inst = seeded_instance(n, d, dens, seed);
        let dord = ident_dom(&inst);
        for t in RecognitionTarget::ALL {
            let fast = find_var_order(&inst, t, &dord).unwrap();
            let slow = exhaustive_var_order(&inst, t, &dord).unwrap();
            prop_assert_eq!(fast.is_some(), slow.is_some(), "{}", t);
            if let Some(o) = fast {
                prop_assert!(!occurs_in_instance(&t.pattern(), &inst, &o, &dord).unwrap());
            }
        }
    }

    #[test]
    fn domain_order_search_agrees_with_exhaustion(n in 2usize..=5, d in 1usize..=5, dens in 0.2..0.9f64, seed in any::<u64>()) {
        let inst = seeded_instance(n, d, dens, seed);
        let vo = TotalOrder::identity(n);
        for t in [RecognitionTarget::Bti, RecognitionTarget::Btx] {
            let fast = find_dom_order(&inst, t, &vo).unwrap();
            let slow = exhaustive_dom_order(&inst, t, &vo).unwrap();
            prop_assert_eq!(fast.is_some(), slow.is_some(), "{}", t);
        }
    }

    #[test]
    fn emitted_constraints_are_closed_under_their_extremum(n in 3usize..=5, d in 2usize..=3, dens in 0.2..0.9f64, seed in any::<u64>(), picks in prop::collection::vec(any::<u64>(), 40)) {
        let inst = seeded_instance(n, d, dens, seed);
        for t in RecognitionTarget::ALL {
            let op = collect_var_order_witnesses(&inst, t, &ident_dom(&inst)).unwrap();
            for c in &op.constraints {
                let k = c.scope().len();
                let tuples: Vec<Vec<usize>> = (0..n.pow(k as u32))
                    .map(|mut code| (0..k).map(|_| { let v = code % n; code /= n; v }).collect::<Vec<usize>>())
                    .filter(|v| c.holds_on_scope(v))
                    .collect();
                for pair in picks.chunks(2) {
                    let (s, u) = (&tuples[pair[0] as usize % tuples.len()], &tuples[pair[1] as usize % tuples.len()]);
                    let combined: Vec<usize> = s.iter().zip(u).map(|(&a, &b)| if t == RecognitionTarget::Btp { a.max(b) } else { a.min(b) }).collect();
                    prop_assert!(c.holds_on_scope(&combined), "{:?} {:?} {:?}", c, s, u);
                }
            }
        }
    }
}
