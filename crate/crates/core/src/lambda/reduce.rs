//! Weak call-by-value reduction with fair choice.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;
use core::hash::{Hash, Hasher};

use rustc_hash::FxHasher;

use super::nameless::Nameless;
use crate::engine::Rewrite;
use crate::error::{Error, Result};
use crate::multidist::SubDistribution;
use crate::prob::Prob;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Dir {
    AppLeft,
    AppRight,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum RedexKind {
    Beta,
    Choice,
}

/// Where a redex sits: a path through application nodes only.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct RedexPosition {
    pub path: Vec<Dir>,
    pub kind: RedexKind,
}

impl RedexPosition {
    pub fn root(kind: RedexKind) -> Self {
        RedexPosition { path: Vec::new(), kind }
    }
}

impl fmt::Display for RedexPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            RedexKind::Beta => "beta",
            RedexKind::Choice => "choice",
        };
        f.write_str(kind)?;
        f.write_str("@")?;
        if self.path.is_empty() {
            return f.write_str("root");
        }
        for d in &self.path {
            f.write_str(match d {
                Dir::AppLeft => "L",
                Dir::AppRight => "R",
            })?;
        }
        Ok(())
    }
}

/// All weak redexes, left to right: a root redex first, then those in the
/// operator, then those in the operand.
pub fn redexes(term: &Nameless) -> Vec<RedexPosition> {
    let mut out = Vec::new();
    collect(term, &mut Vec::new(), &mut out);
    out
}

fn collect(term: &Nameless, path: &mut Vec<Dir>, out: &mut Vec<RedexPosition>) {
    match term {
        Nameless::Choice(..) => out.push(RedexPosition { path: path.clone(), kind: RedexKind::Choice }),
        Nameless::App(l, r) => {
            if matches!(**l, Nameless::Abs(_)) && r.is_value() {
                out.push(RedexPosition { path: path.clone(), kind: RedexKind::Beta });
            }
            path.push(Dir::AppLeft);
            collect(l, path, out);
            path.pop();
            path.push(Dir::AppRight);
            collect(r, path, out);
            path.pop();
        }
        Nameless::Bound(_) | Nameless::Free(_) | Nameless::Abs(_) => {}
    }
}

pub fn is_normal(term: &Nameless) -> bool {
    match term {
        Nameless::Choice(..) => false,
        Nameless::App(l, r) => !(matches!(**l, Nameless::Abs(_)) && r.is_value()) && is_normal(l) && is_normal(r),
        Nameless::Bound(_) | Nameless::Free(_) | Nameless::Abs(_) => true,
    }
}

/// Contracts the redex at `pos` and plugs each contractum back into its context.
pub fn step_at(term: &Nameless, pos: &RedexPosition) -> Result<SubDistribution<Nameless>> {
    let contracta = contract(term, &pos.path, pos.kind)?;
    SubDistribution::from_entries(contracta)
}

fn contract(term: &Nameless, path: &[Dir], kind: RedexKind) -> Result<Vec<(Nameless, Prob)>> {
    match (path.split_first(), term) {
        (None, Nameless::App(l, r)) if kind == RedexKind::Beta => match &**l {
            Nameless::Abs(body) if r.is_value() => Ok(vec![(Nameless::instantiate(body, r)?, Prob::one())]),
            _ => Err(Error::InvalidPosition),
        },
        (None, Nameless::Choice(l, r)) if kind == RedexKind::Choice => {
            Ok(vec![((**l).clone(), Prob::half()), ((**r).clone(), Prob::half())])
        }
        (Some((Dir::AppLeft, rest)), Nameless::App(l, r)) => {
            Ok(contract(l, rest, kind)?.into_iter().map(|(t, p)| (Nameless::App(Arc::new(t), r.clone()), p)).collect())
        }
        (Some((Dir::AppRight, rest)), Nameless::App(l, r)) => {
            Ok(contract(r, rest, kind)?.into_iter().map(|(t, p)| (Nameless::App(l.clone(), Arc::new(t)), p)).collect())
        }
        _ => Err(Error::InvalidPosition),
    }
}

/// Which redexes a [`LambdaSystem`] exposes as rules.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Strategy {
    Full,
    Leftmost,
    Rightmost,
    /// One redex per term, fixed by hashing the term with the seed.
    Random(u64),
}

impl Strategy {
    pub fn name(self) -> String {
        match self {
            Strategy::Full => "full".into(),
            Strategy::Leftmost => "leftmost".into(),
            Strategy::Rightmost => "rightmost".into(),
            Strategy::Random(seed) => format!("random({seed})"),
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "full" => Some(Strategy::Full),
            "leftmost" => Some(Strategy::Leftmost),
            "rightmost" => Some(Strategy::Rightmost),
            _ => {
                let seed = text.strip_prefix("random(")?.strip_suffix(')')?;
                seed.parse().ok().map(Strategy::Random)
            }
        }
    }

    pub fn is_deterministic(self) -> bool {
        self != Strategy::Full
    }

    fn select(self, term: &Nameless, mut positions: Vec<RedexPosition>) -> Vec<RedexPosition> {
        if positions.is_empty() {
            return positions;
        }
        match self {
            Strategy::Full => positions,
            Strategy::Leftmost => {
                positions.truncate(1);
                positions
            }
            Strategy::Rightmost => vec![positions.pop().expect("non-empty")],
            Strategy::Random(seed) => {
                let mut h = FxHasher::default();
                seed.hash(&mut h);
                term.hash(&mut h);
                let i = (h.finish() % positions.len() as u64) as usize;
                vec![positions.swap_remove(i)]
            }
        }
    }
}

/// Terms (up to α) as a rewrite system under a strategy.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct LambdaSystem {
    pub strategy: Strategy,
}

impl LambdaSystem {
    pub fn new(strategy: Strategy) -> Self {
        LambdaSystem { strategy }
    }
}

impl Rewrite for LambdaSystem {
    type Elem = Nameless;

    fn rules(&self, term: &Nameless) -> Vec<SubDistribution<Nameless>> {
        self.strategy
            .select(term, redexes(term))
            .iter()
            .map(|pos| step_at(term, pos).expect("position comes from redexes"))
            .collect()
    }

    fn is_normal(&self, term: &Nameless) -> bool {
        is_normal(term)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::term::Term;
    use alloc::string::ToString;

    fn v(x: &str) -> Term {
        Term::var(x)
    }

    fn n(t: &Term) -> Nameless {
        Nameless::from_term(t)
    }

    fn id() -> Term {
        Term::abs("z", v("z"))
    }

    #[test]
    fn redex_positions() {
        let t = Term::app(Term::app(id(), id()), Term::app(id(), v("x")));
        let ps = redexes(&n(&t));
        assert_eq!(ps.len(), 2);
        assert_eq!(ps[0].path, vec![Dir::AppLeft]);
        assert_eq!(ps[1].path, vec![Dir::AppRight]);
        assert!(ps.iter().all(|p| p.kind == RedexKind::Beta));

        assert!(redexes(&n(&Term::abs("x", Term::app(id(), id())))).is_empty());

        let p = Term::abs("x", v("x"));
        let t = Term::app(Term::app(p, id()), Term::choice(v("a"), v("b")));
        let ps = redexes(&n(&t));
        assert_eq!(ps.len(), 2);
        assert_eq!((ps[0].path.clone(), ps[0].kind), (vec![Dir::AppLeft], RedexKind::Beta));
        assert_eq!((ps[1].path.clone(), ps[1].kind), (vec![Dir::AppRight], RedexKind::Choice));
    }

    #[test]
    fn no_redex_behind_a_non_value_argument() {
        // the operand is an application, so the root is not yet a redex
        let t = Term::app(id(), Term::app(id(), id()));
        let ps = redexes(&n(&t));
        assert_eq!(ps, vec![RedexPosition { path: vec![Dir::AppRight], kind: RedexKind::Beta }]);
    }

    #[test]
    fn contraction() {
        let c = n(&Term::choice(v("true"), v("false")));
        let d = step_at(&c, &RedexPosition::root(RedexKind::Choice)).unwrap();
        assert_eq!(d.to_string(), "{false: 1/2, true: 1/2}");

        let b = n(&Term::app(Term::abs("x", v("x")), id()));
        let d = step_at(&b, &RedexPosition::root(RedexKind::Beta)).unwrap();
        assert_eq!(d, SubDistribution::point(n(&id())));

        let ctx = Term::app(v("P"), Term::choice(v("true"), v("false")));
        let pos = RedexPosition { path: vec![Dir::AppRight], kind: RedexKind::Choice };
        let d = step_at(&n(&ctx), &pos).unwrap();
        let expect = SubDistribution::from_entries([
            (n(&Term::app(v("P"), v("true"))), Prob::half()),
            (n(&Term::app(v("P"), v("false"))), Prob::half()),
        ])
        .unwrap();
        assert_eq!(d, expect);

        assert_eq!(step_at(&b, &RedexPosition::root(RedexKind::Choice)), Err(Error::InvalidPosition));
        let deep = RedexPosition { path: vec![Dir::AppLeft, Dir::AppLeft], kind: RedexKind::Beta };
        assert_eq!(step_at(&b, &deep), Err(Error::InvalidPosition));
    }

    #[test]
    fn strategies_pick_one_side() {
        let t = n(&Term::app(Term::app(id(), id()), Term::app(id(), v("x"))));
        let left = LambdaSystem::new(Strategy::Leftmost).rules(&t);
        let right = LambdaSystem::new(Strategy::Rightmost).rules(&t);
        assert_eq!(left, vec![SubDistribution::point(n(&Term::app(id(), Term::app(id(), v("x")))))]);
        assert_eq!(right, vec![SubDistribution::point(n(&Term::app(Term::app(id(), id()), v("x"))))]);
        assert_eq!(LambdaSystem::new(Strategy::Full).rules(&t).len(), 2);
        let r = LambdaSystem::new(Strategy::Random(7)).rules(&t);
        assert_eq!(r.len(), 1);
        assert_eq!(r, LambdaSystem::new(Strategy::Random(7)).rules(&t));

        for s in [Strategy::Full, Strategy::Leftmost, Strategy::Rightmost, Strategy::Random(1)] {
            assert!(LambdaSystem::new(s).rules(&n(&id())).is_empty());
            assert_eq!(Strategy::parse(&s.name()), Some(s));
        }
    }

    #[test]
    fn normality_agrees_with_redexes() {
        let terms = [
            Term::app(v("x"), v("y")),
            Term::app(id(), Term::app(v("x"), v("y"))),
            Term::abs("x", Term::choice(v("x"), v("x"))),
            Term::app(Term::app(id(), id()), v("x")),
        ];
        for t in &terms {
            let t = n(t);
            assert_eq!(is_normal(&t), redexes(&t).is_empty(), "{t}");
        }
    }
}
