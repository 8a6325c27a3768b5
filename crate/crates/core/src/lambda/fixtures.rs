//! Standard closed terms: Church booleans, XOR, and the divergent and
//! probabilistic examples used in tests.

use super::term::Term;

fn v(x: &str) -> Term {
    Term::var(x)
}

/// `\x. \y. x`
pub fn tru() -> Term {
    Term::abs("x", Term::abs("y", v("x")))
}

/// `\x. \y. y`
pub fn fls() -> Term {
    Term::abs("x", Term::abs("y", v("y")))
}

/// `\a. \b. a (b F T) b`
pub fn xor() -> Term {
    let not_b = Term::apps(v("b"), [fls(), tru()]);
    Term::abs("a", Term::abs("b", Term::apps(v("a"), [not_b, v("b")])))
}

/// `\z. z`
pub fn id() -> Term {
    Term::abs("z", v("z"))
}

/// `\x. x x`
pub fn delta() -> Term {
    Term::abs("x", Term::app(v("x"), v("x")))
}

/// `(\x. x x) (\x. x x)`
pub fn omega() -> Term {
    Term::app(delta(), delta())
}

/// `(\x. x) (\x. XOR x x)`
pub fn p() -> Term {
    let body = Term::apps(xor(), [v("x"), v("x")]);
    Term::app(Term::abs("x", v("x")), Term::abs("x", body))
}

/// `(T (+) F) (+) ΔΔ`
pub fn coin_or_loop() -> Term {
    Term::choice(Term::choice(tru(), fls()), omega())
}

/// `P ((T (+) F) (+) ΔΔ)`; its limit is `{F: 1/2}`.
pub fn pr() -> Term {
    Term::app(p(), coin_or_loop())
}

/// `\x. x x (+) T`
fn retry() -> Term {
    Term::abs("x", Term::choice(Term::app(v("x"), v("x")), tru()))
}

/// `(\x. x x (+) T) (\x. x x (+) T)`: reaches `T` almost surely.
pub fn retry_loop() -> Term {
    Term::app(retry(), retry())
}

/// Turing's fixpoint combinator `A A` with `A = \x. \f. f (x x f)`.
pub fn turing_fixpoint() -> Term {
    let a = Term::abs("x", Term::abs("f", Term::app(v("f"), Term::apps(v("x"), [v("x"), v("f")]))));
    Term::app(a.clone(), a)
}

/// `(I I) (I I)`: two independent redexes.
pub fn two_redexes() -> Term {
    Term::app(Term::app(id(), id()), Term::app(id(), id()))
}

/// Named fixtures, in a fixed order.
pub fn all() -> [(&'static str, Term); 5] {
    [
        ("pr", pr()),
        ("retry-loop", retry_loop()),
        ("turing-fixpoint", turing_fixpoint()),
        ("two-redexes", two_redexes()),
        ("omega", omega()),
    ]
}
