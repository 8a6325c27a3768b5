//! Untyped λ-calculus with fair binary choice under weak call-by-value
//! reduction, presented as a probabilistic rewrite system over α-classes.

pub mod fixtures;
mod gen;
mod nameless;
mod reduce;
mod term;

pub use gen::{random_term, MAX_SIZE};
pub use nameless::Nameless;
pub use reduce::{is_normal, redexes, step_at, Dir, LambdaSystem, RedexKind, RedexPosition, Strategy};
pub use term::{fresh_name, Term};

use crate::checkers::{check_diamond, check_rd_global, witness, CheckVerdict, Observation, WitnessKind};
use crate::engine::successors;
use crate::multidist::MultiDistribution;

/// Checks every corpus term under unrestricted reduction: distinct one-step
/// reducts have no normal mass and rejoin in one step, and all reducts at
/// equal depth (up to `depth`) have equal normal-form distributions.
pub fn diamond_harness(corpus: &[Term], depth: usize, cap: usize) -> CheckVerdict<Nameless> {
    let sys = LambdaSystem::new(Strategy::Full);
    let obs = Observation::Nf;
    let mut truncated = false;
    for term in corpus {
        let m = MultiDistribution::unit(Nameless::from_term(term));
        let succ = successors(&sys, &m, cap);
        truncated |= succ.truncated;
        if succ.states.len() > 1 {
            if let Some(t) = succ.states.iter().find(|t| !t.nf(is_normal).is_empty()) {
                let other = succ.states.iter().find(|s| *s != t).expect("at least two states");
                let w = witness(&sys, WitnessKind::ObsMismatch, obs, &m, t, other, 1);
                return CheckVerdict::refuted(1, w, true, truncated);
            }
        }
        let local = check_diamond(&sys, &m, obs, cap);
        if local.is_refuted() {
            return local;
        }
        truncated |= local.truncated;
        let global = check_rd_global(&sys, &m, obs, depth, cap);
        if global.is_refuted() {
            return global;
        }
        truncated |= global.truncated;
    }
    CheckVerdict::finish(depth, truncated)
}
