//! Limit bounds, expected step counts and bounded-depth classification.
//!
//! Everything here is a certified finite approximation: the normal-form part
//! of a state only grows along a rewrite sequence, so the normal-form part at
//! depth `d` is a lower bound on every limit reachable through that state, and
//! the remaining mass bounds how far the limit can still move.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::engine::{reachable, successors, Rewrite, RewriteTrace, MD};
use crate::error::{Error, Result};
use crate::multidist::{MultiDistribution, Relation, SubDistribution};
use crate::prob::{fmt_rational, Prob, Rational};

/// Lower bound on the limit of a sequence, with the mass still undecided.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct LimitBound<E: Ord> {
    pub lower: SubDistribution<E>,
    pub depth: usize,
    pub residual: Prob,
}

impl<E: Ord + Clone> LimitBound<E> {
    /// Largest limit mass any extension can still reach.
    pub fn upper_mass(&self) -> Rational {
        self.lower.mass().into_rational() + self.residual.as_rational()
    }
}

/// Normal-form part of the last state of `trace`.
pub fn limit_bound<E: Ord + Clone>(trace: &RewriteTrace<E>) -> LimitBound<E> {
    let lower = trace.nf.last().expect("trace is never empty").clone();
    let residual = trace.last().total_mass().saturating_sub(&lower.mass());
    LimitBound { lower, depth: trace.depth(), residual }
}

/// Partial sum of the expected number of steps.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MeanTimeBound {
    /// `Σ_{n<N} (1 - nnorm(m_n))`.
    pub partial: Rational,
    pub depth: usize,
    /// Per-step terms `1 - nnorm(m_n)`, `n < N`.
    pub contributions: Vec<Prob>,
    /// The last step left a positive residual unchanged.
    pub divergence_witness: bool,
}

/// Requires a start of total mass one.
pub fn meantime_bound<E: Ord + Clone>(trace: &RewriteTrace<E>) -> Result<MeanTimeBound> {
    let start = trace.states[0].total_mass();
    if !start.is_one() {
        return Err(Error::NotUnitMass(fmt_rational(start.as_rational())));
    }
    let depth = trace.depth();
    let contributions: Vec<Prob> = trace.nnorm[..depth].iter().map(Prob::complement).collect();
    let partial = contributions.iter().map(Prob::as_rational).sum();
    let divergence_witness = depth >= 1 && {
        let before = trace.nnorm[depth - 1].complement();
        let after = trace.nnorm[depth].complement();
        !after.is_zero() && after >= before
    };
    Ok(MeanTimeBound { partial, depth, contributions, divergence_witness })
}

/// Limit bounds of every state reachable in exactly `depth` steps,
/// deduplicated and sorted.
#[derive(Clone, Debug)]
pub struct LimitExploration<E: Ord> {
    pub bounds: Vec<LimitBound<E>>,
    pub initial_mass: Prob,
    pub truncated: bool,
}

pub fn explore_limits<R: Rewrite>(sys: &R, m0: MD<R>, depth: usize, cap: usize) -> LimitExploration<R::Elem> {
    let initial_mass = m0.total_mass();
    let levels = reachable(sys, m0, depth, cap);
    let bounds: BTreeSet<LimitBound<R::Elem>> = levels.levels[depth]
        .iter()
        .map(|m| {
            let lower = m.nf(|e| sys.is_normal(e));
            let residual = initial_mass.saturating_sub(&lower.mass());
            LimitBound { lower, depth, residual }
        })
        .collect();
    LimitExploration { bounds: bounds.into_iter().collect(), initial_mass, truncated: levels.truncated }
}

/// Outcome of one bounded test.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Evidence {
    /// Nothing seen up to the depth contradicts the property.
    Supported,
    /// Contradicted at this depth, but deeper exploration could change it.
    Refuted,
    /// Contradicted for every extension.
    ConclusivelyRefuted,
}

impl Evidence {
    pub fn name(self) -> &'static str {
        match self {
            Evidence::Supported => "evidence",
            Evidence::Refuted => "refuted-at-depth",
            Evidence::ConclusivelyRefuted => "conclusively-refuted",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Classification<E: Ord> {
    pub depth: usize,
    pub truncated: bool,
    pub bound_count: usize,
    /// Unique greatest limit.
    pub un: Evidence,
    /// Two bounds that cannot lie below a common limit (or are incomparable).
    pub un_witness: Option<(LimitBound<E>, LimitBound<E>)>,
    /// All sequences converge with the same probability.
    pub sn: Evidence,
    /// Converging with probability one along every sequence.
    pub ast: Evidence,
    pub min_residual: Prob,
    pub max_residual: Prob,
    /// Best normal-form probability seen, and the greedy trace's value.
    pub wn_best: Prob,
    pub greedy_nnorm: Prob,
}

/// Bounded-depth evidence for uniqueness and termination properties.
///
/// A uniqueness refutation is conclusive when two bounds already carry more
/// joint mass than the start has: no single limit can lie above both.
pub fn classify<R: Rewrite>(sys: &R, m0: MD<R>, depth: usize, cap: usize) -> Classification<R::Elem> {
    let greedy = greedy_trace(sys, m0.clone(), depth, cap);
    let explored = explore_limits(sys, m0, depth, cap);
    let initial = explored.initial_mass.as_rational().clone();
    let bounds = &explored.bounds;

    let mut best: Option<(Rational, usize, usize)> = None;
    let mut incomparable: Option<(usize, usize)> = None;
    for i in 0..bounds.len() {
        for j in i + 1..bounds.len() {
            let join = bounds[i].lower.join_mass(&bounds[j].lower);
            if join > initial && best.as_ref().is_none_or(|(b, _, _)| join > *b) {
                best = Some((join, i, j));
            }
            if incomparable.is_none() && bounds[i].lower.pointwise_cmp(&bounds[j].lower) == Relation::Incomparable {
                incomparable = Some((i, j));
            }
        }
    }
    let (un, pair) = match (best, incomparable) {
        (Some((_, i, j)), _) => (Evidence::ConclusivelyRefuted, Some((i, j))),
        (None, Some(pair)) => (Evidence::Refuted, Some(pair)),
        (None, None) => (Evidence::Supported, None),
    };
    let un_witness = pair.map(|(i, j)| (bounds[i].clone(), bounds[j].clone()));

    let min_residual = bounds.iter().map(|b| b.residual.clone()).min().unwrap_or_default();
    let max_residual = bounds.iter().map(|b| b.residual.clone()).max().unwrap_or_default();
    let sn = if min_residual == max_residual { Evidence::Supported } else { Evidence::Refuted };
    let ast =
        if max_residual.is_zero() || max_residual.as_rational() < &initial { Evidence::Supported } else { Evidence::Refuted };
    let wn_best = explored.initial_mass.saturating_sub(&min_residual);
    let greedy_nnorm = greedy.nnorm.last().cloned().unwrap_or_default();
    Classification {
        depth,
        truncated: explored.truncated,
        bound_count: bounds.len(),
        un,
        un_witness,
        sn,
        ast,
        min_residual,
        max_residual,
        wn_best,
        greedy_nnorm,
    }
}

/// Heuristic search for a sequence of greatest normal-form probability: each
/// step takes the successor with the largest `nnorm` (first in canonical
/// order on ties).
pub fn greedy_trace<R: Rewrite>(sys: &R, m0: MD<R>, depth: usize, cap: usize) -> RewriteTrace<R::Elem> {
    let is_normal = |e: &R::Elem| sys.is_normal(e);
    let mut states = alloc::vec![m0];
    for _ in 0..depth {
        let current = states.last().expect("non-empty");
        let succ = successors(sys, current, cap);
        let mut pick: Option<&MultiDistribution<R::Elem>> = None;
        for s in &succ.states {
            if pick.is_none_or(|p| s.nnorm(is_normal) > p.nnorm(is_normal)) {
                pick = Some(s);
            }
        }
        let next = pick.cloned().unwrap_or_else(|| current.clone());
        states.push(next);
    }
    RewriteTrace::from_states("greedy-nnorm".into(), states, is_normal)
}

/// Partial geometric sums, used by tests and reports: `Σ_{n<k} 2^-n`.
pub fn geometric_partial(k: u32) -> Rational {
    (0..k).map(|n| Prob::dyadic(n).into_rational()).fold(BigRational::zero(), |a, b| a + b)
}

/// `1 - 2^-k`.
pub fn one_minus_dyadic(k: u32) -> Rational {
    BigRational::one() - Prob::dyadic(k).into_rational()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{run, Atom, ParsSystem, Policy};
    use alloc::string::ToString;

    fn sym(s: &str) -> Atom {
        Atom::sym(s)
    }

    fn two(a: &str, b: &str) -> SubDistribution<Atom> {
        SubDistribution::from_entries([(sym(a), Prob::half()), (sym(b), Prob::half())]).unwrap()
    }

    fn fig1() -> ParsSystem {
        let mut s = ParsSystem::new("fig1");
        s.add_rule(sym("c"), two("c", "true")).unwrap();
        s
    }

    fn fig4() -> ParsSystem {
        let mut s = ParsSystem::new("fig4");
        s.add_rule(sym("a"), two("a", "true")).unwrap();
        s.add_rule(sym("a"), two("a", "false")).unwrap();
        s
    }

    fn fig5() -> ParsSystem {
        let mut s = ParsSystem::new("fig5");
        s.add_rule(sym("a"), two("a", "true")).unwrap();
        s.add_rule(sym("a"), SubDistribution::point(sym("a"))).unwrap();
        s
    }

    #[test]
    fn limit_bound_examples() {
        let t = run(&fig1(), MultiDistribution::unit(sym("c")), &Policy::Uniform(0), 20).unwrap();
        let b = limit_bound(&t);
        assert_eq!(b.lower.get(&sym("true")).into_rational(), one_minus_dyadic(20));
        assert_eq!(b.residual, Prob::dyadic(20));

        let t = run(&fig1(), MultiDistribution::unit(sym("true")), &Policy::Uniform(0), 4).unwrap();
        let b = limit_bound(&t);
        assert_eq!(b.lower, SubDistribution::point(sym("true")));
        assert!(b.residual.is_zero());

        let t = run(&fig5(), MultiDistribution::unit(sym("a")), &Policy::Uniform(1), 7).unwrap();
        assert!(t.nf.iter().all(SubDistribution::is_empty));
    }

    #[test]
    fn meantime_examples() {
        let t = run(&fig1(), MultiDistribution::unit(sym("c")), &Policy::Uniform(0), 30).unwrap();
        let mt = meantime_bound(&t).unwrap();
        assert_eq!(mt.partial, BigRational::from_integer(2.into()) - Prob::dyadic(29).into_rational());
        assert_eq!(mt.partial, geometric_partial(30));
        assert!(!mt.divergence_witness);

        let t = run(&fig1(), MultiDistribution::unit(sym("true")), &Policy::Uniform(0), 9).unwrap();
        assert!(meantime_bound(&t).unwrap().partial.is_zero());

        let t = run(&fig5(), MultiDistribution::unit(sym("a")), &Policy::Uniform(1), 10).unwrap();
        let mt = meantime_bound(&t).unwrap();
        assert_eq!(mt.partial, BigRational::from_integer(10.into()));
        assert!(mt.divergence_witness);

        let half = MultiDistribution::new([(Prob::half(), sym("c"))]).unwrap();
        let t = run(&fig1(), half, &Policy::Uniform(0), 2).unwrap();
        assert!(matches!(meantime_bound(&t), Err(Error::NotUnitMass(_))));
    }

    #[test]
    fn explore_examples() {
        let e = explore_limits(&fig4(), MultiDistribution::unit(sym("a")), 3, 1000);
        // p + q = 7/8 with p ranging over multiples of 1/8
        assert_eq!(e.bounds.len(), 8);
        for b in &e.bounds {
            assert_eq!(b.lower.mass().into_rational(), one_minus_dyadic(3));
        }
        let n = explore_limits(&fig4(), MultiDistribution::unit(sym("true")), 5, 1000);
        assert_eq!(n.bounds.len(), 1);
        assert!(n.bounds[0].residual.is_zero());

        let walk = ParsSystem::new("walk").with_generator(crate::engine::Generator::Walk);
        let w = explore_limits(&walk, MultiDistribution::unit(Atom::Nat(2)), 4, 1000);
        assert_eq!(w.bounds.len(), 1);
        assert_eq!(w.bounds[0].lower.to_string(), "{0: 3/8}");
    }

    #[test]
    fn classify_examples() {
        let c = classify(&fig4(), MultiDistribution::unit(sym("a")), 8, 10_000);
        assert_eq!(c.un, Evidence::ConclusivelyRefuted);
        let (l, r) = c.un_witness.unwrap();
        let near = Prob::new(255, 256).unwrap();
        assert_eq!(l.lower.get(&sym("false")), near);
        assert_eq!(r.lower.get(&sym("true")), near);

        let c = classify(&fig1(), MultiDistribution::unit(sym("c")), 8, 10_000);
        assert_eq!(c.un, Evidence::Supported);
        assert_eq!(c.ast, Evidence::Supported);
        assert_eq!(c.max_residual, Prob::dyadic(8));

        let c = classify(&fig5(), MultiDistribution::unit(sym("a")), 8, 10_000);
        assert_eq!(c.sn, Evidence::Refuted);
        assert_eq!(c.min_residual, Prob::dyadic(8));
        assert_eq!(c.max_residual, Prob::one());
        assert_eq!(c.wn_best.into_rational(), one_minus_dyadic(8));
        assert_eq!(c.greedy_nnorm.into_rational(), one_minus_dyadic(8));
    }
}
