//! Small random rule tables for cross-checking the local criteria against
//! their global counterparts.

use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::{Atom, ParsSystem};
use crate::multidist::SubDistribution;
use crate::prob::Prob;

/// Universe size bound.
pub const MAX_ELEMENTS: usize = 6;
/// Rules per element bound.
pub const MAX_RULES: usize = 2;

/// Ways to split unit mass using quarters, halves and three-quarters.
const SHAPES: &[&[u64]] = &[&[4], &[2, 2], &[1, 3], &[3, 1], &[1, 1, 2], &[1, 1, 1, 1]];

/// A random system over `e0 … e{n-1}`, reproducible from `seed`.
pub fn random_system(seed: u64) -> ParsSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=MAX_ELEMENTS);
    let universe: Vec<Atom> = (0..n).map(|i| Atom::sym(&format!("e{i}"))).collect();
    let mut sys = ParsSystem::new(&format!("random-{seed}"));
    for lhs in &universe {
        for _ in 0..rng.gen_range(0..=MAX_RULES) {
            let shape = SHAPES[rng.gen_range(0..SHAPES.len())];
            let rhs = SubDistribution::from_entries(shape.iter().map(|&quarters| {
                let target = universe[rng.gen_range(0..n)].clone();
                (target, Prob::new(quarters, 4).expect("quarters"))
            }))
            .expect("shape sums to one");
            sys.add_rule(lhs.clone(), rhs).expect("shape sums to one");
        }
    }
    sys
}

/// The universe of a system made by [`random_system`], including normal forms.
pub fn universe(sys: &ParsSystem) -> Vec<Atom> {
    sys.elements()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Rewrite;

    #[test]
    fn reproducible_and_bounded() {
        for seed in 0..50 {
            let a = random_system(seed);
            assert_eq!(a, random_system(seed));
            let elements = universe(&a);
            assert!(elements.len() <= MAX_ELEMENTS);
            for e in &elements {
                let rules = a.rules(e);
                assert!(rules.len() <= MAX_RULES);
                assert!(rules.iter().all(|r| r.mass().is_one()));
            }
        }
    }
}
