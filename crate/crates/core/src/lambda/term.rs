use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use core::fmt;

use crate::error::{Error, Result};

/// Surface λ-term with named variables.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Term {
    Var(String),
    Abs(String, Box<Term>),
    App(Box<Term>, Box<Term>),
    /// Fair binary choice.
    Choice(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var(name.into())
    }

    pub fn abs(binder: &str, body: Term) -> Self {
        Term::Abs(binder.into(), Box::new(body))
    }

    pub fn app(f: Term, a: Term) -> Self {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn choice(l: Term, r: Term) -> Self {
        Term::Choice(Box::new(l), Box::new(r))
    }

    /// Left-nested application `f a1 … an`.
    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Self {
        args.into_iter().fold(f, Term::app)
    }

    pub fn is_value(&self) -> bool {
        matches!(self, Term::Var(_) | Term::Abs(..))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut alloc::vec::Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut alloc::vec::Vec<&'a str>, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) => {
                if !bound.contains(&x.as_str()) {
                    out.insert(x.clone());
                }
            }
            Term::Abs(x, body) => {
                bound.push(x);
                body.collect_free(bound, out);
                bound.pop();
            }
            Term::App(l, r) | Term::Choice(l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Abs(_, b) => 1 + b.size(),
            Term::App(l, r) | Term::Choice(l, r) => 1 + l.size() + r.size(),
        }
    }

    /// Capture-avoiding `self[x := v]`; `v` must be a value.
    pub fn substitute(&self, x: &str, v: &Term) -> Result<Term> {
        if !v.is_value() {
            return Err(Error::NotAValue);
        }
        Ok(self.subst(x, v, &v.free_vars()))
    }

    fn subst(&self, x: &str, v: &Term, fv: &BTreeSet<String>) -> Term {
        match self {
            Term::Var(y) if y == x => v.clone(),
            Term::Var(_) => self.clone(),
            Term::Abs(y, _) if y == x => self.clone(),
            Term::Abs(y, body) => {
                if fv.contains(y) && body.free_vars().contains(x) {
                    let mut avoid = fv.clone();
                    avoid.extend(body.free_vars());
                    avoid.insert(x.into());
                    let fresh = fresh_name(y, &avoid);
                    let renamed = body.subst(y, &Term::Var(fresh.clone()), &BTreeSet::from([fresh.clone()]));
                    Term::Abs(fresh, Box::new(renamed.subst(x, v, fv)))
                } else {
                    Term::Abs(y.clone(), Box::new(body.subst(x, v, fv)))
                }
            }
            Term::App(l, r) => Term::App(Box::new(l.subst(x, v, fv)), Box::new(r.subst(x, v, fv))),
            Term::Choice(l, r) => Term::Choice(Box::new(l.subst(x, v, fv)), Box::new(r.subst(x, v, fv))),
        }
    }
}

/// `base` with primes appended until it avoids `taken`.
pub fn fresh_name(base: &str, taken: &BTreeSet<String>) -> String {
    let mut name = format!("{base}'");
    while taken.contains(&name) {
        name.push('\'');
    }
    name
}

impl fmt::Display for Term {
    /// Surface syntax: `\x. M`, left-nested application, `M (+) N`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => f.write_str(x),
            Term::Abs(x, body) => write!(f, "\\{x}. {body}"),
            Term::App(l, r) => {
                match **l {
                    Term::Abs(..) | Term::Choice(..) => write!(f, "({l})")?,
                    _ => write!(f, "{l}")?,
                }
                match **r {
                    Term::Var(_) => write!(f, " {r}"),
                    _ => write!(f, " ({r})"),
                }
            }
            Term::Choice(l, r) => {
                match **l {
                    Term::Abs(..) | Term::Choice(..) => write!(f, "({l})")?,
                    _ => write!(f, "{l}")?,
                }
                write!(f, " (+) {r}")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn v(x: &str) -> Term {
        Term::var(x)
    }

    #[test]
    fn substitution_examples() {
        let id = Term::abs("z", v("z"));
        let xx = Term::app(v("x"), v("x"));
        assert_eq!(xx.substitute("x", &id).unwrap(), Term::app(id.clone(), id.clone()));

        let k = Term::abs("y", v("x"));
        let out = k.substitute("x", &v("y")).unwrap();
        assert_eq!(out, Term::abs("y'", v("y")));

        let body = Term::choice(xx.clone(), v("true"));
        let value = Term::abs("x", body.clone());
        let r = body.substitute("x", &value).unwrap();
        assert_eq!(r, Term::choice(Term::app(value.clone(), value.clone()), v("true")));

        assert_eq!(xx.substitute("x", &xx), Err(Error::NotAValue));
    }

    #[test]
    fn shadowing_stops_substitution() {
        let t = Term::abs("x", v("x"));
        assert_eq!(t.substitute("x", &v("y")).unwrap(), t);
    }

    #[test]
    fn printing() {
        let id = Term::abs("z", v("z"));
        let t = Term::app(Term::app(id.clone(), id.clone()), Term::app(id.clone(), v("x")));
        assert_eq!(t.to_string(), "(\\z. z) (\\z. z) ((\\z. z) x)");
        let c = Term::choice(Term::choice(v("a"), v("b")), Term::choice(v("c"), v("d")));
        assert_eq!(c.to_string(), "(a (+) b) (+) c (+) d");
        assert_eq!(Term::abs("x", Term::choice(v("x"), v("y"))).to_string(), "\\x. x (+) y");
        assert_eq!(Term::app(Term::choice(v("a"), v("b")), v("c")).to_string(), "(a (+) b) c");
    }

    #[test]
    fn free_variables() {
        let t = Term::abs("x", Term::app(v("x"), v("y")));
        assert_eq!(t.free_vars(), BTreeSet::from(["y".to_string()]));
        assert!(!t.is_closed());
        assert!(Term::abs("x", v("x")).is_closed());
    }
}
