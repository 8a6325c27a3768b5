//! Seeded random closed terms.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::term::Term;

/// Largest generated term, in nodes.
pub const MAX_SIZE: usize = 12;

/// A closed term of at most [`MAX_SIZE`] nodes. Binary nodes are choices
/// with probability 1/3.
pub fn random_term(seed: u64) -> Term {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = rng.gen_range(2..=MAX_SIZE);
    let t = grow(&mut rng, size, &mut Vec::new());
    debug_assert!(t.is_closed() && t.size() == size);
    t
}

/// Smallest closed-under-`env` term size: a variable needs a binder in scope.
fn min_size(env_len: usize) -> usize {
    if env_len == 0 {
        2
    } else {
        1
    }
}

fn grow(rng: &mut ChaCha8Rng, size: usize, env: &mut Vec<String>) -> Term {
    let least = min_size(env.len());
    if size == 1 {
        return Term::Var(env[rng.gen_range(0..env.len())].clone());
    }
    let binary = size > 2 * least;
    if binary && rng.gen_ratio(1, 3) {
        let (l, r) = split(rng, size, least, env);
        return Term::choice(l, r);
    }
    if binary && rng.gen_bool(0.5) {
        let (l, r) = split(rng, size, least, env);
        return Term::app(l, r);
    }
    let name = format!("v{}", env.len());
    env.push(name.clone());
    let body = grow(rng, size - 1, env);
    env.pop();
    Term::abs(&name, body)
}

fn split(rng: &mut ChaCha8Rng, size: usize, least: usize, env: &mut Vec<String>) -> (Term, Term) {
    let left = rng.gen_range(least..=size - 1 - least);
    let l = grow(rng, left, env);
    let r = grow(rng, size - 1 - left, env);
    (l, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_and_small() {
        let mut choices = 0;
        for seed in 0..300 {
            let t = random_term(seed);
            assert!(t.is_closed(), "{t}");
            assert!(t.size() <= MAX_SIZE);
            assert_eq!(t, random_term(seed));
            choices += usize::from(format!("{t}").contains("(+)"));
        }
        assert!(choices > 20);
    }
}
