//! Subdistributions, multidistributions and the observations on them.
//!
//! A [`SubDistribution`] is a finite-support map from elements to non-zero
//! probabilities with total mass at most one. A [`MultiDistribution`] is a
//! finite multiset of `(p, a)` occurrences; it keeps distinct occurrences of
//! the same element apart, and it is stored sorted (element first, then
//! probability) so that structural equality is multiset equality.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::prob::{fmt_rational, Prob, Rational};

/// Outcome of comparing two values under a (pre)order.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Relation {
    Equal,
    /// Strictly below.
    Leq,
    /// Strictly above.
    Geq,
    Incomparable,
}

impl Relation {
    pub fn is_leq(self) -> bool {
        matches!(self, Relation::Equal | Relation::Leq)
    }

    pub fn is_geq(self) -> bool {
        matches!(self, Relation::Equal | Relation::Geq)
    }

    pub fn from_bounds(leq: bool, geq: bool) -> Self {
        match (leq, geq) {
            (true, true) => Relation::Equal,
            (true, false) => Relation::Leq,
            (false, true) => Relation::Geq,
            (false, false) => Relation::Incomparable,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Relation::Equal => "equal",
            Relation::Leq => "leq",
            Relation::Geq => "geq",
            Relation::Incomparable => "incomparable",
        }
    }
}

/// Which observation [`MultiDistribution::compare`] looks through.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CompareMode {
    /// Flattened distribution over all elements.
    Flat,
    /// Subdistribution over normal forms.
    Nf,
    /// Probability of being in normal form.
    Norm,
}

/// Finite-support subdistribution; no zero entries are stored.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SubDistribution<E: Ord> {
    entries: BTreeMap<E, Prob>,
}

impl<E: Ord + Clone> SubDistribution<E> {
    /// The subdistribution with empty support.
    pub fn empty() -> Self {
        SubDistribution { entries: BTreeMap::new() }
    }

    pub fn point(element: E) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(element, Prob::one());
        SubDistribution { entries }
    }

    /// Builds from `(element, p)` pairs, summing repeated elements.
    pub fn from_entries(pairs: impl IntoIterator<Item = (E, Prob)>) -> Result<Self> {
        let mut acc: BTreeMap<E, BigRational> = BTreeMap::new();
        let mut total = BigRational::zero();
        for (element, p) in pairs {
            if p.is_zero() {
                continue;
            }
            total += p.as_rational();
            *acc.entry(element).or_insert_with(BigRational::zero) += p.as_rational();
        }
        if total > BigRational::one() {
            return Err(Error::MassOverflow(fmt_rational(&total)));
        }
        let entries = acc.into_iter().map(|(e, r)| (e, Prob::from_rational(r).expect("bounded by total mass"))).collect();
        Ok(SubDistribution { entries })
    }

    pub fn get(&self, element: &E) -> Prob {
        self.entries.get(element).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&E, &Prob)> {
        self.entries.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &E> {
        self.entries.keys()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total mass `‖μ‖`.
    pub fn mass(&self) -> Prob {
        let total: BigRational = self.entries.values().map(Prob::as_rational).sum();
        Prob::from_rational(total).expect("invariant: mass <= 1")
    }

    pub fn restrict(&self, mut keep: impl FnMut(&E) -> bool) -> Self {
        let entries = self.entries.iter().filter(|(e, _)| keep(e)).map(|(e, p)| (e.clone(), p.clone())).collect();
        SubDistribution { entries }
    }

    /// Pointwise order of functions.
    pub fn pointwise_cmp(&self, other: &Self) -> Relation {
        let mut leq = true;
        let mut geq = true;
        for (e, p) in &self.entries {
            let q = other.get(e);
            leq &= *p <= q;
            geq &= *p >= q;
        }
        for (e, q) in &other.entries {
            if !self.entries.contains_key(e) {
                // self is zero here and q > 0
                geq &= q.is_zero();
            }
        }
        Relation::from_bounds(leq, geq)
    }

    /// Mass of the pointwise maximum of `self` and `other`; may exceed one.
    pub fn join_mass(&self, other: &Self) -> Rational {
        let mut total = BigRational::zero();
        for (e, p) in &self.entries {
            let q = other.get(e);
            total += if *p >= q { p.as_rational() } else { q.as_rational() };
        }
        for (e, q) in &other.entries {
            if !self.entries.contains_key(e) {
                total += q.as_rational();
            }
        }
        total
    }
}

impl<E: Ord + fmt::Display> fmt::Display for SubDistribution<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (e, p)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}: {p}")?;
        }
        f.write_str("}")
    }
}

/// Finite multiset of probability-weighted occurrences with total mass ≤ 1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct MultiDistribution<E> {
    pairs: Vec<(E, Prob)>,
}

impl<E: Ord + Clone> MultiDistribution<E> {
    pub fn empty() -> Self {
        MultiDistribution { pairs: Vec::new() }
    }

    /// `[1 a]`.
    pub fn unit(element: E) -> Self {
        MultiDistribution { pairs: alloc::vec![(element, Prob::one())] }
    }

    /// Builds from `(p, a)` occurrences; zero-probability occurrences are dropped.
    pub fn new(occurrences: impl IntoIterator<Item = (Prob, E)>) -> Result<Self> {
        let pairs: Vec<(E, Prob)> = occurrences.into_iter().map(|(p, e)| (e, p)).collect();
        let total: BigRational = pairs.iter().map(|(_, p)| p.as_rational()).sum();
        if total > BigRational::one() {
            return Err(Error::MassOverflow(fmt_rational(&total)));
        }
        Ok(Self::from_pairs_unchecked(pairs))
    }

    /// Canonicalizes occurrences already known to carry mass ≤ 1.
    pub(crate) fn from_pairs_unchecked(mut pairs: Vec<(E, Prob)>) -> Self {
        pairs.retain(|(_, p)| !p.is_zero());
        pairs.sort();
        MultiDistribution { pairs }
    }

    /// One occurrence per support element of `dist`.
    pub fn from_distribution(dist: &SubDistribution<E>) -> Self {
        let pairs = dist.iter().map(|(e, p)| (e.clone(), p.clone())).collect();
        MultiDistribution { pairs }
    }

    /// Occurrences in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&E, &Prob)> {
        self.pairs.iter().map(|(e, p)| (e, p))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn total_mass(&self) -> Prob {
        let total: BigRational = self.pairs.iter().map(|(_, p)| p.as_rational()).sum();
        Prob::from_rational(total).expect("invariant: mass <= 1")
    }

    /// `q · m`: every occurrence `(p, a)` becomes `(q·p, a)`.
    pub fn scale(&self, q: &Prob) -> Self {
        let pairs = self.pairs.iter().map(|(e, p)| (e.clone(), q * p)).collect();
        Self::from_pairs_unchecked(pairs)
    }

    /// Disjoint (multiset) sum; fails when the combined mass exceeds one.
    pub fn sum<'a>(parts: impl IntoIterator<Item = &'a Self>) -> Result<Self>
    where
        E: 'a,
    {
        let mut pairs = Vec::new();
        let mut total = BigRational::zero();
        for part in parts {
            for (e, p) in &part.pairs {
                total += p.as_rational();
                pairs.push((e.clone(), p.clone()));
            }
        }
        if total > BigRational::one() {
            return Err(Error::MassOverflow(fmt_rational(&total)));
        }
        Ok(Self::from_pairs_unchecked(pairs))
    }

    /// The flattened subdistribution `μ♭`.
    pub fn flatten(&self) -> SubDistribution<E> {
        SubDistribution::from_entries(self.pairs.iter().cloned()).expect("invariant: mass <= 1")
    }

    /// Mass on normal forms, per normal form.
    pub fn nf(&self, is_normal: impl Fn(&E) -> bool) -> SubDistribution<E> {
        SubDistribution::from_entries(self.pairs.iter().filter(|(e, _)| is_normal(e)).cloned()).expect("invariant: mass <= 1")
    }

    /// Probability of being in normal form, `‖nf m‖`.
    pub fn nnorm(&self, is_normal: impl Fn(&E) -> bool) -> Prob {
        let total: BigRational = self.pairs.iter().filter(|(e, _)| is_normal(e)).map(|(_, p)| p.as_rational()).sum();
        Prob::from_rational(total).expect("invariant: mass <= 1")
    }

    /// Mass not yet on normal forms.
    pub fn residual(&self, is_normal: impl Fn(&E) -> bool) -> Prob {
        let total: BigRational = self.pairs.iter().filter(|(e, _)| !is_normal(e)).map(|(_, p)| p.as_rational()).sum();
        Prob::from_rational(total).expect("invariant: mass <= 1")
    }

    /// Compares `self` with `other` through the observation selected by `mode`.
    pub fn compare(&self, other: &Self, mode: CompareMode, is_normal: impl Fn(&E) -> bool) -> Relation {
        match mode {
            CompareMode::Flat => self.flatten().pointwise_cmp(&other.flatten()),
            CompareMode::Nf => self.nf(&is_normal).pointwise_cmp(&other.nf(&is_normal)),
            CompareMode::Norm => {
                let (a, b) = (self.nnorm(&is_normal), other.nnorm(&is_normal));
                Relation::from_bounds(a <= b, a >= b)
            }
        }
    }
}

impl<E: fmt::Display> fmt::Display for MultiDistribution<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (e, p)) in self.pairs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p} {e}")?;
        }
        f.write_str("]")
    }
}
