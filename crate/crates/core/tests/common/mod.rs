#![allow(dead_code)]

use ac_patterns::enumerate::strict_partial_orders;
use ac_patterns::generate::random_instance;
use ac_patterns::pattern::Point;
use ac_patterns::{Instance, Pattern, ValueUniverse};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn seeded_instance(n: usize, d: usize, density: f64, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_instance(n, d, density, &mut rng)
}

/// Instances with up to `max_n` variables and `max_d` values.
pub fn arb_instance(max_n: usize, max_d: usize) -> impl Strategy<Value = Instance> {
    (1..=max_n, 1..=max_d, 0.0..=1.0f64, any::<u64>()).prop_map(|(n, d, dens, seed)| seeded_instance(n, d, dens, seed))
}

/// Number of solutions by walking every tuple of the domain product.
pub fn count_by_tuples(inst: &Instance) -> u64 {
    let n = inst.num_vars();
    let mut idx = vec![0usize; n];
    let mut count = 0;
    if n == 0 {
        return 1;
    }
    loop {
        let vals: Vec<usize> = (0..n).map(|v| inst.domain(v)[idx[v]]).collect();
        if (0..n).all(|x| (x + 1..n).all(|y| inst.compatible(x, vals[x], y, vals[y]))) {
            count += 1;
        }
        let mut k = 0;
        while k < n {
            idx[k] += 1;
            if idx[k] < inst.domain(k).len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == n {
            return count;
        }
    }
}

/// Domains as label sets, one per variable.
pub fn domain_labels(inst: &Instance) -> Vec<Vec<i64>> {
    (0..inst.num_vars())
        .map(|v| inst.domain(v).iter().map(|&a| inst.universe().label(a)).collect())
        .collect()
}

/// A small pattern: 1..=3 variables with 1..=2 points each, arbitrary
/// compatibilities, any partial variable order and any domain orders.
pub fn arb_pattern() -> impl Strategy<Value = Pattern> {
    (prop::collection::vec(1..=2usize, 1..=3), any::<u64>(), any::<u64>(), any::<u64>()).prop_map(
        |(sizes, cpt_bits, vo_pick, do_bits)| {
            let nv = sizes.len();
            let vars: Vec<String> = ["x", "y", "z"][..nv].iter().map(|s| s.to_string()).collect();
            let points: Vec<Point> = sizes
                .iter()
                .enumerate()
                .flat_map(|(v, &k)| (0..k).map(move |i| Point { var: v, name: ["a", "b"][i].to_string() }))
                .collect();
            let np = points.len();
            let mut cpt = Vec::new();
            let mut bits = cpt_bits;
            for p in 0..np {
                for q in p + 1..np {
                    if points[p].var != points[q].var {
                        match bits % 3 {
                            1 => cpt.push((p, q, true)),
                            2 => cpt.push((p, q, false)),
                            _ => {}
                        }
                        bits /= 3;
                    }
                }
            }
            let orders = strict_partial_orders(nv);
            let vo = orders[(vo_pick % orders.len() as u64) as usize].clone();
            let mut dord = Vec::new();
            let mut start = 0;
            for (v, &k) in sizes.iter().enumerate() {
                if k == 2 {
                    match (do_bits >> (2 * v)) % 3 {
                        1 => dord.push((start, start + 1)),
                        2 => dord.push((start + 1, start)),
                        _ => {}
                    }
                }
                start += k;
            }
            Pattern::new(vars, points, cpt, vo, dord, []).expect("generated pattern is valid")
        },
    )
}

/// The same pattern with variables and points listed in another order and
/// renamed, for isomorphism tests.
pub fn relabel(p: &Pattern, var_perm: &[usize], flip_points: bool) -> Pattern {
    let nv = p.num_vars();
    let names: Vec<String> = (0..nv).map(|k| format!("v{k}")).collect();
    // var_perm[old] = new position
    let mut order: Vec<usize> = (0..p.num_points()).collect();
    if flip_points {
        order.reverse();
    }
    let pos: Vec<usize> = {
        let mut pos = vec![0; p.num_points()];
        for (new, &old) in order.iter().enumerate() {
            pos[old] = new;
        }
        pos
    };
    let points: Vec<Point> = order
        .iter()
        .map(|&old| Point { var: var_perm[p.point_var(old)], name: format!("q{old}") })
        .collect();
    let cpt: Vec<(usize, usize, bool)> = p.cpt_entries().map(|(a, b, v)| (pos[a], pos[b], v)).collect();
    let vo: Vec<(usize, usize)> = p.var_order().iter().map(|&(a, b)| (var_perm[a], var_perm[b])).collect();
    let dord: Vec<(usize, usize)> = p.dom_order().iter().map(|&(a, b)| (pos[a], pos[b])).collect();
    let diseq: Vec<(usize, usize)> = p.diseq().iter().map(|&(a, b)| (pos[a], pos[b])).collect();
    Pattern::new(names, points, cpt, vo, dord, diseq).expect("relabelled pattern is valid")
}

/// Tree-structured instance: variable `k > 0` is attached to a random
/// earlier parent by a random relation.
pub fn random_tree(n: usize, d: usize, seed: u64) -> Instance {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inst = Instance::with_uniform_domains(ValueUniverse::range(1, d as i64), n);
    for k in 1..n {
        let parent = rng.gen_range(0..k);
        let allowed: Vec<(usize, usize)> =
            (0..d).flat_map(|a| (0..d).map(move |b| (a, b))).filter(|_| rng.gen_bool(0.5)).collect();
        inst.add_constraint(parent, k, allowed).expect("fresh pair");
    }
    inst
}
