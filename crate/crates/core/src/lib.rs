//! Probabilistic abstract rewriting with exact arithmetic.
//!
//! Elements rewrite to full-mass distributions; [`MultiDistribution`]s
//! track weighted occurrences and evolve by the lifted one-step relation.
//! On top of the engine sit limit bounds, expected-time sums, local
//! criteria checkers and a weak call-by-value λ-calculus with fair choice.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod asymptotics;
pub mod checkers;
pub mod engine;
pub mod error;
pub mod lambda;
pub mod multidist;
pub mod prob;

pub use engine::{Atom, ChoiceResolver, ParsSystem, Rewrite};
pub use error::{Error, Result};
pub use multidist::{CompareMode, MultiDistribution, Relation, SubDistribution};
pub use prob::{Prob, Rational};
