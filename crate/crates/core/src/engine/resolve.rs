use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{ChoiceResolver, Rewrite};
use crate::multidist::SubDistribution;

/// Where a choice is being made: the element, its index in the canonical
/// occurrence order of the current multidistribution, and the step number.
#[derive(Clone, Copy, Debug)]
pub struct Occurrence<'a, E> {
    pub element: &'a E,
    pub position: usize,
    pub step: usize,
}

/// Built-in resolvers. Out-of-range indices saturate to the last rule.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Policy {
    /// Rule `k` for every occurrence of every element.
    Uniform(usize),
    /// At step `n` every occurrence takes rule `bits[n]`; the last entry repeats.
    Bits(Vec<u8>),
    /// Pseudo-random but reproducible from the seed, position and step.
    Seeded(u64),
}

impl Policy {
    /// `all-r<k>` (alias `always-r<k>`), `lex(<digits>)`, `seed(<n>)` or a bare seed.
    pub fn parse(name: &str) -> Option<Self> {
        let number = |s: &str| s.parse::<u64>().ok();
        if let Some(k) = name.strip_prefix("all-r").or_else(|| name.strip_prefix("always-r")) {
            return number(k).and_then(|k| usize::try_from(k).ok()).map(Policy::Uniform);
        }
        if let Some(body) = name.strip_prefix("lex(").and_then(|s| s.strip_suffix(')')) {
            if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            return Some(Policy::Bits(body.bytes().map(|b| b - b'0').collect()));
        }
        if let Some(body) = name.strip_prefix("seed(").and_then(|s| s.strip_suffix(')')) {
            return number(body).map(Policy::Seeded);
        }
        number(name).map(Policy::Seeded)
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

impl<E> ChoiceResolver<E> for Policy {
    fn choose(&self, occurrence: &Occurrence<'_, E>, rule_count: usize) -> usize {
        let last = rule_count.saturating_sub(1);
        match self {
            Policy::Uniform(k) => (*k).min(last),
            Policy::Bits(bits) => {
                let i = occurrence.step.min(bits.len().saturating_sub(1));
                usize::from(bits.get(i).copied().unwrap_or(0)).min(last)
            }
            Policy::Seeded(seed) => {
                let mixed = splitmix64(seed ^ splitmix64(((occurrence.step as u64) << 32) ^ occurrence.position as u64));
                (mixed % rule_count.max(1) as u64) as usize
            }
        }
    }

    fn id(&self) -> String {
        match self {
            Policy::Uniform(k) => format!("all-r{k}"),
            Policy::Bits(bits) => {
                let digits: String = bits.iter().map(|b| char::from(b'0' + b)).collect();
                format!("lex({digits})")
            }
            Policy::Seeded(seed) => format!("seed({seed})"),
        }
    }
}

/// The sub-relation that keeps only rule `rule` of each element (saturating).
/// Normal forms are the same as in the full relation.
#[derive(Clone, Debug)]
pub struct Restrict<S> {
    pub inner: S,
    pub rule: usize,
}

impl<S> Restrict<S> {
    pub fn new(inner: S, rule: usize) -> Self {
        Restrict { inner, rule }
    }

    pub fn name(&self) -> String {
        format!("always-r{}", self.rule)
    }
}

impl<S: Rewrite> Rewrite for Restrict<S> {
    type Elem = S::Elem;

    fn rules(&self, element: &Self::Elem) -> Vec<SubDistribution<Self::Elem>> {
        let mut all = self.inner.rules(element);
        if all.is_empty() {
            return all;
        }
        let k = self.rule.min(all.len() - 1);
        alloc::vec![all.swap_remove(k)]
    }

    fn is_normal(&self, element: &Self::Elem) -> bool {
        self.inner.is_normal(element)
    }
}
