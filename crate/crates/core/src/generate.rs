//! Seeded random instances in which a given pattern does not occur.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::{Instance, ValueUniverse};
use crate::occurrence::{find_homomorphism, InstanceView, Target};
use crate::order::TotalOrder;
use crate::pattern::Pattern;

/// Uniform random instance: `n_vars` variables over values `0..dom_size`,
/// every pair constrained, each tuple allowed with probability `density`.
pub fn random_instance(n_vars: usize, dom_size: usize, density: f64, rng: &mut impl Rng) -> Instance {
    let mut inst = Instance::with_uniform_domains(ValueUniverse::range(0, dom_size as i64 - 1), n_vars);
    for x in 0..n_vars {
        for y in x + 1..n_vars {
            let pairs: Vec<(usize, usize)> = (0..dom_size)
                .flat_map(|a| (0..dom_size).map(move |b| (a, b)))
                .filter(|_| rng.gen_bool(density))
                .collect();
            inst.add_constraint(x, y, pairs).expect("fresh pair");
        }
    }
    inst
}

/// Draws a random instance and random total orders, then repeatedly turns
/// an incompatible pair used by an occurrence of `p` into a compatible one
/// until `p` no longer occurs under those orders. Each repair only adds
/// compatible pairs, so the loop terminates.
pub fn gen_pattern_free_instance(
    p: &Pattern,
    n_vars: usize,
    dom_size: usize,
    density: f64,
    seed: u64,
) -> Result<(Instance, TotalOrder, TotalOrder)> {
    if dom_size == 0 || !(0.0..=1.0).contains(&density) {
        return Err(Error::Malformed("need dom_size >= 1 and density in [0, 1]".into()));
    }
    let negative = p.negative_edges();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inst = random_instance(n_vars, dom_size, density, &mut rng);
    let mut vseq: Vec<usize> = (0..n_vars).collect();
    vseq.shuffle(&mut rng);
    let mut dseq: Vec<usize> = (0..dom_size).collect();
    dseq.shuffle(&mut rng);
    let var_order = TotalOrder::from_sequence(vseq)?;
    let dom_order = TotalOrder::from_sequence(dseq)?;
    loop {
        let flip = {
            let view = InstanceView::new(&inst, &var_order, &dom_order)?;
            match find_homomorphism(p, &view) {
                None => break,
                Some(h) => {
                    let &(s, t) = negative
                        .first()
                        .ok_or_else(|| Error::InvalidPattern("pattern without negative edge occurs everywhere".into()))?;
                    let (x, a) = view.point(h.points[s]);
                    let (y, b) = view.point(h.points[t]);
                    debug_assert_eq!(view.cpt(h.points[s], h.points[t]), Some(false));
                    (x, a, y, b)
                }
            }
        };
        inst.set_compatible(flip.0, flip.1, flip.2, flip.3, true);
    }
    Ok((inst, var_order, dom_order))
}
