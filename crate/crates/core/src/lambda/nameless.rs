//! Index-based terms. Two named terms convert to the same nameless term iff
//! they are α-equivalent, so these serve as rewrite elements.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use super::term::Term;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Nameless {
    /// Distance to the binding abstraction, counting from zero.
    Bound(usize),
    Free(Arc<str>),
    Abs(Arc<Nameless>),
    App(Arc<Nameless>, Arc<Nameless>),
    Choice(Arc<Nameless>, Arc<Nameless>),
}

impl Nameless {
    pub fn abs(body: Nameless) -> Self {
        Nameless::Abs(Arc::new(body))
    }

    pub fn app(f: Nameless, a: Nameless) -> Self {
        Nameless::App(Arc::new(f), Arc::new(a))
    }

    pub fn choice(l: Nameless, r: Nameless) -> Self {
        Nameless::Choice(Arc::new(l), Arc::new(r))
    }

    pub fn from_term(term: &Term) -> Self {
        fn go<'a>(t: &'a Term, env: &mut Vec<&'a str>) -> Nameless {
            match t {
                Term::Var(x) => match env.iter().rev().position(|b| b == x) {
                    Some(i) => Nameless::Bound(i),
                    None => Nameless::Free(Arc::from(x.as_str())),
                },
                Term::Abs(x, body) => {
                    env.push(x);
                    let b = go(body, env);
                    env.pop();
                    Nameless::abs(b)
                }
                Term::App(l, r) => Nameless::app(go(l, env), go(r, env)),
                Term::Choice(l, r) => Nameless::choice(go(l, env), go(r, env)),
            }
        }
        go(term, &mut Vec::new())
    }

    /// Named form; binders are named by nesting depth, avoiding free names.
    pub fn to_term(&self) -> Term {
        let free: BTreeSet<String> = self.free_names();
        let binder = |depth: usize| {
            const BASE: [&str; 6] = ["x", "y", "z", "w", "u", "v"];
            let mut name = if depth < BASE.len() {
                String::from(BASE[depth])
            } else {
                format!("{}{}", BASE[depth % BASE.len()], depth / BASE.len())
            };
            while free.contains(&name) {
                name.push('\'');
            }
            name
        };
        fn go(t: &Nameless, names: &mut Vec<String>, binder: &dyn Fn(usize) -> String) -> Term {
            match t {
                Nameless::Bound(i) => match names.len().checked_sub(i + 1) {
                    Some(k) => Term::Var(names[k].clone()),
                    // dangling index: only reachable for ill-formed input
                    None => Term::Var(format!("#{i}")),
                },
                Nameless::Free(x) => Term::Var(String::from(&**x)),
                Nameless::Abs(body) => {
                    let name = binder(names.len());
                    names.push(name.clone());
                    let b = go(body, names, binder);
                    names.pop();
                    Term::Abs(name, alloc::boxed::Box::new(b))
                }
                Nameless::App(l, r) => Term::app(go(l, names, binder), go(r, names, binder)),
                Nameless::Choice(l, r) => Term::choice(go(l, names, binder), go(r, names, binder)),
            }
        }
        go(self, &mut Vec::new(), &binder)
    }

    pub fn free_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk_free(&mut out);
        out
    }

    fn walk_free(&self, out: &mut BTreeSet<String>) {
        match self {
            Nameless::Bound(_) => {}
            Nameless::Free(x) => {
                out.insert(String::from(&**x));
            }
            Nameless::Abs(b) => b.walk_free(out),
            Nameless::App(l, r) | Nameless::Choice(l, r) => {
                l.walk_free(out);
                r.walk_free(out);
            }
        }
    }

    pub fn is_value(&self) -> bool {
        matches!(self, Nameless::Bound(_) | Nameless::Free(_) | Nameless::Abs(_))
    }

    /// No free names and no dangling indices.
    pub fn is_closed(&self) -> bool {
        fn go(t: &Nameless, depth: usize) -> bool {
            match t {
                Nameless::Bound(i) => *i < depth,
                Nameless::Free(_) => false,
                Nameless::Abs(b) => go(b, depth + 1),
                Nameless::App(l, r) | Nameless::Choice(l, r) => go(l, depth) && go(r, depth),
            }
        }
        go(self, 0)
    }

    pub fn size(&self) -> usize {
        match self {
            Nameless::Bound(_) | Nameless::Free(_) => 1,
            Nameless::Abs(b) => 1 + b.size(),
            Nameless::App(l, r) | Nameless::Choice(l, r) => 1 + l.size() + r.size(),
        }
    }

    /// Adds `by` to every index pointing outside `cutoff` binders.
    fn shift(&self, by: usize, cutoff: usize) -> Nameless {
        match self {
            Nameless::Bound(i) if *i >= cutoff => Nameless::Bound(i + by),
            Nameless::Bound(_) | Nameless::Free(_) => self.clone(),
            Nameless::Abs(b) => Nameless::abs(b.shift(by, cutoff + 1)),
            Nameless::App(l, r) => Nameless::app(l.shift(by, cutoff), r.shift(by, cutoff)),
            Nameless::Choice(l, r) => Nameless::choice(l.shift(by, cutoff), r.shift(by, cutoff)),
        }
    }

    /// Body of an abstraction with its bound variable replaced by `v`.
    pub fn instantiate(body: &Nameless, v: &Nameless) -> Result<Nameless> {
        if !v.is_value() {
            return Err(Error::NotAValue);
        }
        fn go(t: &Nameless, depth: usize, v: &Nameless) -> Nameless {
            match t {
                Nameless::Bound(i) if *i == depth => v.shift(depth, 0),
                Nameless::Bound(i) if *i > depth => Nameless::Bound(i - 1),
                Nameless::Bound(_) | Nameless::Free(_) => t.clone(),
                Nameless::Abs(b) => Nameless::abs(go(b, depth + 1, v)),
                Nameless::App(l, r) => Nameless::app(go(l, depth, v), go(r, depth, v)),
                Nameless::Choice(l, r) => Nameless::choice(go(l, depth, v), go(r, depth, v)),
            }
        }
        Ok(go(body, 0, v))
    }
}

impl From<&Term> for Nameless {
    fn from(t: &Term) -> Self {
        Nameless::from_term(t)
    }
}

impl fmt::Display for Nameless {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_term())
    }
}
