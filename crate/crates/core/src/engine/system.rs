use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_traits::One;

use super::Rewrite;
use crate::error::{Error, Result};
use crate::multidist::SubDistribution;
use crate::prob::{fmt_rational, Prob};

/// An element of a rule table: a natural number or a symbol.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Atom {
    Nat(u64),
    Sym(Arc<str>),
}

impl Atom {
    pub fn sym(name: &str) -> Self {
        Atom::Sym(Arc::from(name))
    }

    /// Digits become numbers, anything else a symbol.
    pub fn parse(text: &str) -> Self {
        if !text.is_empty() && text.bytes().all(|b| b.is_ascii_digit()) {
            if let Ok(n) = text.parse() {
                return Atom::Nat(n);
            }
        }
        Atom::sym(text)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Nat(n) => write!(f, "{n}"),
            Atom::Sym(s) => f.write_str(s),
        }
    }
}

/// Built-in rule families over the naturals.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Generator {
    /// `n+1 → {n: 1/2, n+2: 1/2}`; `0` is normal.
    Walk,
    /// The walk plus a second rule `n+1 → {stop: 1}`.
    WalkStop,
}

impl Generator {
    pub fn name(self) -> &'static str {
        match self {
            Generator::Walk => "walk",
            Generator::WalkStop => "walk-stop",
        }
    }

    fn rules(self, n: u64) -> Vec<SubDistribution<Atom>> {
        if n == 0 {
            return Vec::new();
        }
        let step =
            SubDistribution::from_entries([(Atom::Nat(n - 1), Prob::half()), (Atom::Nat(n.saturating_add(1)), Prob::half())])
                .expect("two halves");
        match self {
            Generator::Walk => alloc::vec![step],
            Generator::WalkStop => alloc::vec![step, SubDistribution::point(Atom::sym("stop"))],
        }
    }
}

/// A finite rule table, optionally extended by a generator over the naturals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParsSystem {
    pub name: String,
    rules: BTreeMap<Atom, Vec<SubDistribution<Atom>>>,
    generator: Option<Generator>,
}

impl ParsSystem {
    pub fn new(name: &str) -> Self {
        ParsSystem { name: name.into(), rules: BTreeMap::new(), generator: None }
    }

    pub fn with_generator(mut self, generator: Generator) -> Self {
        self.generator = Some(generator);
        self
    }

    pub fn set_generator(&mut self, generator: Option<Generator>) {
        self.generator = generator;
    }

    pub fn generator(&self) -> Option<Generator> {
        self.generator
    }

    /// Appends a rule for `lhs`; its right-hand side must have mass exactly one.
    pub fn add_rule(&mut self, lhs: Atom, rhs: SubDistribution<Atom>) -> Result<()> {
        let mass = rhs.mass();
        if !mass.as_rational().is_one() {
            return Err(Error::RuleMassNotOne(fmt_rational(mass.as_rational())));
        }
        self.rules.entry(lhs).or_default().push(rhs);
        Ok(())
    }

    /// Rules written explicitly, in insertion order per element.
    pub fn explicit_rules(&self) -> impl Iterator<Item = (&Atom, &SubDistribution<Atom>)> {
        self.rules.iter().flat_map(|(lhs, rhss)| rhss.iter().map(move |r| (lhs, r)))
    }

    /// Elements mentioned anywhere in the explicit table.
    pub fn elements(&self) -> Vec<Atom> {
        let mut all: Vec<Atom> =
            self.explicit_rules().flat_map(|(lhs, rhs)| core::iter::once(lhs.clone()).chain(rhs.support().cloned())).collect();
        all.sort();
        all.dedup();
        all
    }
}

impl Rewrite for ParsSystem {
    type Elem = Atom;

    /// Explicit rules first, then generated ones.
    fn rules(&self, element: &Atom) -> Vec<SubDistribution<Atom>> {
        let mut out = self.rules.get(element).cloned().unwrap_or_default();
        if let (Some(generator), Atom::Nat(n)) = (self.generator, element) {
            out.extend(generator.rules(*n));
        }
        out
    }

    fn is_normal(&self, element: &Atom) -> bool {
        if self.rules.contains_key(element) {
            return false;
        }
        !matches!((self.generator, element), (Some(_), Atom::Nat(n)) if *n > 0)
    }
}
