//! Rule tables and the lifted one-step relation on multidistributions.

mod resolve;
mod system;

pub use resolve::{Occurrence, Policy, Restrict};
pub use system::{Atom, Generator, ParsSystem};

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::multidist::{MultiDistribution, SubDistribution};
use crate::prob::Prob;

/// A probabilistic rewrite relation: each element maps to an ordered list of
/// full-mass distributions. An element without rules is a normal form.
pub trait Rewrite {
    type Elem: Clone + Ord + fmt::Debug;

    fn rules(&self, element: &Self::Elem) -> Vec<SubDistribution<Self::Elem>>;

    fn is_normal(&self, element: &Self::Elem) -> bool {
        self.rules(element).is_empty()
    }
}

impl<R: Rewrite + ?Sized> Rewrite for &R {
    type Elem = R::Elem;

    fn rules(&self, element: &Self::Elem) -> Vec<SubDistribution<Self::Elem>> {
        (**self).rules(element)
    }

    fn is_normal(&self, element: &Self::Elem) -> bool {
        (**self).is_normal(element)
    }
}

/// Picks a rule index for each non-normal occurrence during a lifted step.
pub trait ChoiceResolver<E> {
    /// Index into the element's rule list; `rule_count` is at least one.
    fn choose(&self, occurrence: &Occurrence<'_, E>, rule_count: usize) -> usize;

    /// Stable name recorded in traces.
    fn id(&self) -> String;
}

pub type MD<R> = MultiDistribution<<R as Rewrite>::Elem>;

/// One lifted step: normal occurrences stay, every other occurrence is
/// replaced by the scaled right-hand side of the rule the resolver picks.
pub fn lift_step<R, C>(sys: &R, m: &MD<R>, resolver: &C, step: usize) -> Result<MD<R>>
where
    R: Rewrite,
    C: ChoiceResolver<R::Elem> + ?Sized,
{
    let mut pairs = Vec::with_capacity(m.len() * 2);
    for (position, (element, p)) in m.iter().enumerate() {
        let rules = sys.rules(element);
        if rules.is_empty() {
            pairs.push((element.clone(), p.clone()));
            continue;
        }
        let occurrence = Occurrence { element, position, step };
        let index = resolver.choose(&occurrence, rules.len());
        let rhs = rules.get(index).ok_or(Error::ChoiceOutOfRange { index, available: rules.len() })?;
        pairs.extend(rhs.iter().map(|(b, q)| (b.clone(), p * q)));
    }
    Ok(MultiDistribution::from_pairs_unchecked(pairs))
}

/// Distinct one-step successors, in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Successors<E> {
    pub states: Vec<MultiDistribution<E>>,
    /// Set when the enumeration hit the cap and dropped states.
    pub truncated: bool,
}

/// Every distinct successor of `m`, ranging the rule choice over each
/// occurrence independently. At most `cap` states are kept.
pub fn successors<R: Rewrite>(sys: &R, m: &MD<R>, cap: usize) -> Successors<R::Elem> {
    let cap = cap.max(1);
    let mut fixed = Vec::new();
    let mut partials: BTreeSet<Vec<(R::Elem, Prob)>> = BTreeSet::new();
    partials.insert(Vec::new());
    let mut truncated = false;
    for (element, p) in m.iter() {
        let rules = sys.rules(element);
        if rules.is_empty() {
            fixed.push((element.clone(), p.clone()));
            continue;
        }
        let mut next = BTreeSet::new();
        'outer: for partial in &partials {
            for rhs in &rules {
                let mut v = partial.clone();
                v.extend(rhs.iter().map(|(b, q)| (b.clone(), p * q)));
                v.sort();
                next.insert(v);
                if next.len() > cap {
                    truncated = true;
                    break 'outer;
                }
            }
        }
        while next.len() > cap {
            next.pop_last();
        }
        partials = next;
    }
    let states = partials
        .into_iter()
        .map(|mut v| {
            v.extend(fixed.iter().cloned());
            MultiDistribution::from_pairs_unchecked(v)
        })
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    Successors { states, truncated }
}

/// A finite rewrite sequence produced by a fixed resolver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteTrace<E: Ord> {
    pub resolver: String,
    pub states: Vec<MultiDistribution<E>>,
    pub nf: Vec<SubDistribution<E>>,
    pub nnorm: Vec<Prob>,
}

impl<E: Ord + Clone> RewriteTrace<E> {
    pub fn from_states(resolver: String, states: Vec<MultiDistribution<E>>, is_normal: impl Fn(&E) -> bool) -> Self {
        let nf = states.iter().map(|m| m.nf(&is_normal)).collect();
        let nnorm = states.iter().map(|m| m.nnorm(&is_normal)).collect();
        RewriteTrace { resolver, states, nf, nnorm }
    }

    pub fn last(&self) -> &MultiDistribution<E> {
        self.states.last().expect("trace is never empty")
    }

    /// Number of steps taken.
    pub fn depth(&self) -> usize {
        self.states.len() - 1
    }
}

/// `m0 ⇛ m1 ⇛ … ⇛ m_depth` under `resolver`.
pub fn run<R, C>(sys: &R, m0: MD<R>, resolver: &C, depth: usize) -> Result<RewriteTrace<R::Elem>>
where
    R: Rewrite,
    C: ChoiceResolver<R::Elem> + ?Sized,
{
    let mut states = Vec::with_capacity(depth + 1);
    states.push(m0);
    for step in 0..depth {
        let current = states.last().expect("non-empty");
        // once everything is normal the sequence is constant
        let next = if current.iter().all(|(e, _)| sys.is_normal(e)) {
            current.clone()
        } else {
            lift_step(sys, current, resolver, step)?
        };
        states.push(next);
    }
    Ok(RewriteTrace::from_states(resolver.id(), states, |e| sys.is_normal(e)))
}

/// States reachable in exactly `k` steps, for every `k <= depth`.
#[derive(Clone, Debug)]
pub struct Levels<E> {
    pub levels: Vec<Vec<MultiDistribution<E>>>,
    pub truncated: bool,
}

/// Distinct one-step successors of every state of `level`, capped at `cap`.
/// The flag reports truncation.
pub fn next_level<R: Rewrite>(sys: &R, level: &[MD<R>], cap: usize) -> (Vec<MD<R>>, bool) {
    let mut next = BTreeSet::new();
    let mut truncated = false;
    for m in level {
        let succ = successors(sys, m, cap);
        truncated |= succ.truncated;
        next.extend(succ.states);
        if next.len() > cap {
            truncated = true;
            while next.len() > cap {
                next.pop_last();
            }
        }
    }
    (next.into_iter().collect(), truncated)
}

/// Breadth-first exploration; each level is deduplicated and capped at `cap`.
pub fn reachable<R: Rewrite>(sys: &R, m0: MD<R>, depth: usize, cap: usize) -> Levels<R::Elem> {
    let mut levels = alloc::vec![alloc::vec![m0]];
    let mut truncated = false;
    for _ in 0..depth {
        let (next, t) = next_level(sys, levels.last().expect("non-empty"), cap);
        truncated |= t;
        levels.push(next);
    }
    Levels { levels, truncated }
}
