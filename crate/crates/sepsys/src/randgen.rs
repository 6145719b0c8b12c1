//! Seeded random inputs for the test suites and the fuzz subcommand.
//! Everything is driven by an explicit ChaCha stream so failures replay from
//! the seed alone.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::instances::{graph_universe, powerset_universe};
use crate::limits::Limits;
use crate::system::{classify, nested, CornerStrategy, CornerSystem, SepId, SubSystem, Universe};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Connected simple graph on `nmin..=nmax` vertices: a uniformly attached
/// spanning tree plus extra edges.
pub fn random_connected_graph(
    rng: &mut impl Rng,
    nmin: u32,
    nmax: u32,
) -> (u32, Vec<(u32, u32)>) {
    let n = rng.gen_range(nmin..=nmax);
    let mut order: Vec<u32> = (0..n).collect();
    order.shuffle(rng);
    let mut edges: BTreeSet<(u32, u32)> = BTreeSet::new();
    for i in 1..n as usize {
        let j = rng.gen_range(0..i);
        let (a, b) = (order[i], order[j]);
        edges.insert((a.min(b), a.max(b)));
    }
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(0.3) {
                edges.insert((a, b));
            }
        }
    }
    (n, edges.into_iter().collect())
}

/// A small universe to draw subsystems from: a powerset lattice or a random
/// connected graph's separations.
pub fn random_small_universe(rng: &mut impl Rng, limits: &Limits) -> Universe {
    match rng.gen_range(0..4u32) {
        0 => powerset_universe(3, limits).expect("within limits"),
        1 => powerset_universe(4, limits).expect("within limits"),
        _ => {
            let (n, edges) = random_connected_graph(rng, 3, 4);
            graph_universe(&edges, Some(n), limits).expect("within limits")
        }
    }
}

/// Inversion-closed subsystem with at most `max_pairs` involution pairs,
/// materialized under a random corner strategy.
pub fn random_corner_system(
    rng: &mut impl Rng,
    u: &Universe,
    max_pairs: usize,
) -> CornerSystem {
    let mut reps: Vec<SepId> = (0..u.len() as u32)
        .map(SepId)
        .filter(|&s| s <= u.inv_id(s))
        .collect();
    reps.shuffle(rng);
    let k = rng.gen_range(1..=reps.len().min(max_pairs).max(1));
    let mut members = Vec::with_capacity(2 * k);
    for &r in &reps[..k] {
        members.push(r);
        members.push(u.inv_id(r));
    }
    let strategy = *[
        CornerStrategy::Induced,
        CornerStrategy::PosetSup,
        CornerStrategy::Comparable,
    ]
    .choose(rng)
    .expect("nonempty");
    SubSystem::new(u, members).corner_system(strategy)
}

/// Greedy random tree set of a system: shuffled candidates accepted while
/// they stay nested with everything accepted and are neither trivial,
/// cotrivial nor degenerate there. At most `max_pairs` involution pairs.
pub fn random_tree_set(
    rng: &mut impl Rng,
    sys: &CornerSystem,
    max_pairs: usize,
) -> Vec<SepId> {
    let mut idx: Vec<usize> = (0..sys.len()).collect();
    idx.shuffle(rng);
    let mut chosen: Vec<usize> = Vec::new();
    for i in idx {
        if chosen.len() / 2 >= max_pairs {
            break;
        }
        if chosen.contains(&i) {
            continue;
        }
        let s = sys.elems()[i];
        let f = classify(sys, s);
        if f.trivial || f.cotrivial || f.degenerate {
            continue;
        }
        if chosen.iter().all(|&c| nested(sys, s, sys.elems()[c])) {
            chosen.push(i);
            let ii = sys.inv_local(i);
            if ii != i {
                chosen.push(ii);
            }
        }
    }
    let mut out: Vec<SepId> = chosen.into_iter().map(|i| sys.elems()[i]).collect();
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::is_tree_set;

    #[test]
    fn graphs_are_connected_and_simple() {
        let mut rng = rng_from_seed(7);
        for _ in 0..50 {
            let (n, edges) = random_connected_graph(&mut rng, 3, 6);
            assert!(edges.len() >= n as usize - 1);
            // connectivity by union-find over the edge list
            let mut root: Vec<u32> = (0..n).collect();
            fn find(root: &[u32], mut x: u32) -> u32 {
                while root[x as usize] != x {
                    x = root[x as usize];
                }
                x
            }
            for &(a, b) in &edges {
                assert!(a < b && b < n);
                let (ra, rb) = (find(&root, a), find(&root, b));
                root[ra as usize] = rb;
            }
            let r0 = find(&root, 0);
            assert!((1..n).all(|v| find(&root, v) == r0), "disconnected");
        }
    }

    #[test]
    fn generators_are_deterministic_per_seed() {
        let (a1, a2) = (
            random_connected_graph(&mut rng_from_seed(42), 3, 6),
            random_connected_graph(&mut rng_from_seed(42), 3, 6),
        );
        assert_eq!(a1, a2);
    }

    #[test]
    fn random_tree_sets_pass_the_definition() {
        let mut rng = rng_from_seed(3);
        let limits = Limits::default();
        for _ in 0..30 {
            let u = random_small_universe(&mut rng, &limits);
            let sys = random_corner_system(&mut rng, &u, 8);
            let tree = random_tree_set(&mut rng, &sys, 4);
            assert!(is_tree_set(&sys, &tree));
        }
    }
}
