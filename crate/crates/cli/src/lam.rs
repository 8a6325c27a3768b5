//! λ-term surface syntax and `.lam` definition files.
//!
//! Terms: `\x y. M` (body extends right), left-associative application,
//! `M (+) N` for fair choice (lowest precedence, right-associative).
//! Files hold `name = term;` definitions; later ones may use earlier names.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use pars_core::lambda::Term;

use crate::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Lambda,
    Dot,
    Open,
    Close,
    Choice,
    Equals,
    Semi,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut j = 0;
        while j < chars.len() {
            let (line, column) = (i + 1, j + 1);
            let fixed = match chars[j] {
                '#' => break,
                c if c.is_whitespace() => {
                    j += 1;
                    continue;
                }
                '\\' | 'λ' => Some((Tok::Lambda, 1)),
                '.' => Some((Tok::Dot, 1)),
                '=' => Some((Tok::Equals, 1)),
                ';' => Some((Tok::Semi, 1)),
                ')' => Some((Tok::Close, 1)),
                '(' if chars[j..].starts_with(&['(', '+', ')']) => Some((Tok::Choice, 3)),
                '(' => Some((Tok::Open, 1)),
                c if c.is_ascii_alphabetic() || c == '_' => None,
                other => return Err(ParseError::new(line, column, format!("unexpected character `{other}`"))),
            };
            let tok = match fixed {
                Some((tok, width)) => {
                    j += width;
                    tok
                }
                None => {
                    let start = j;
                    while j < chars.len() && (chars[j].is_ascii_alphanumeric() || matches!(chars[j], '_' | '\'')) {
                        j += 1;
                    }
                    Tok::Ident(chars[start..j].iter().collect())
                }
            };
            out.push(Spanned { tok, line, column });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        let end = (text.lines().count().max(1), text.lines().last().map_or(1, |l| l.chars().count() + 1));
        Ok(Parser { toks: lex(text)?, pos: 0, end })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let (line, column) = self.toks.get(self.pos).map_or(self.end, |s| (s.line, s.column));
        ParseError::new(line, column, message)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(x)) => {
                let x = x.clone();
                self.pos += 1;
                Ok(x)
            }
            _ => Err(self.error("expected an identifier")),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let left = self.application()?;
        if self.peek() == Some(&Tok::Choice) {
            self.pos += 1;
            let right = self.term()?;
            return Ok(Term::choice(left, right));
        }
        Ok(left)
    }

    fn application(&mut self) -> Result<Term, ParseError> {
        let mut head = self.atom()?;
        while matches!(self.peek(), Some(Tok::Ident(_) | Tok::Open | Tok::Lambda)) {
            let arg = self.atom()?;
            head = Term::app(head, arg);
        }
        Ok(head)
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some(Tok::Ident(_)) => Ok(Term::Var(self.ident()?)),
            Some(Tok::Open) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(Tok::Close, "`)`")?;
                Ok(t)
            }
            Some(Tok::Lambda) => {
                self.pos += 1;
                let mut binders = vec![self.ident()?];
                while matches!(self.peek(), Some(Tok::Ident(_))) {
                    binders.push(self.ident()?);
                }
                self.expect(Tok::Dot, "`.`")?;
                let body = self.term()?;
                Ok(binders.iter().rev().fold(body, |b, x| Term::abs(x, b)))
            }
            _ => Err(self.error("expected a term")),
        }
    }

    fn done(&self) -> bool {
        self.pos == self.toks.len()
    }
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(text)?;
    let t = p.term()?;
    if !p.done() {
        return Err(p.error("unexpected input after the term"));
    }
    Ok(t)
}

/// Definitions in file order, each already expanded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LamFile {
    pub defs: Vec<(String, Term)>,
}

impl LamFile {
    pub fn get(&self, name: &str) -> Option<&Term> {
        self.defs.iter().rev().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    /// Replaces free names bound by a definition.
    pub fn expand(&self, term: &Term) -> Term {
        let table: BTreeMap<&str, &Term> = self.defs.iter().map(|(n, t)| (n.as_str(), t)).collect();
        expand(term, &table, &mut Vec::new())
    }
}

fn expand<'a>(term: &'a Term, defs: &BTreeMap<&str, &Term>, bound: &mut Vec<&'a str>) -> Term {
    match term {
        Term::Var(x) if !bound.contains(&x.as_str()) => defs.get(x.as_str()).map_or_else(|| term.clone(), |t| (*t).clone()),
        Term::Var(_) => term.clone(),
        Term::Abs(x, body) => {
            bound.push(x);
            let b = expand(body, defs, bound);
            bound.pop();
            Term::abs(x, b)
        }
        Term::App(l, r) => Term::app(expand(l, defs, bound), expand(r, defs, bound)),
        Term::Choice(l, r) => Term::choice(expand(l, defs, bound), expand(r, defs, bound)),
    }
}

/// Parses `name = term;` definitions. Names of earlier definitions occurring
/// free in a later one are replaced by their (closed) expansions; a
/// definition that is not closed after expansion is rejected, so that
/// expansion never captures.
pub fn parse_lam(text: &str) -> Result<LamFile, ParseError> {
    let mut p = Parser::new(text)?;
    let mut file = LamFile { defs: Vec::new() };
    while !p.done() {
        let at = p.pos;
        let name = p.ident()?;
        p.expect(Tok::Equals, "`=`")?;
        let t = p.term()?;
        p.expect(Tok::Semi, "`;`")?;
        let expanded = file.expand(&t);
        if !expanded.is_closed() {
            let free: Vec<String> = expanded.free_vars().into_iter().collect();
            let s = &p.toks[at];
            return Err(ParseError::new(s.line, s.column, format!("`{name}` has free names: {}", free.join(", "))));
        }
        file.defs.push((name, expanded));
    }
    Ok(file)
}

/// Canonical text of a term: the printer's output parses back to an
/// α-equivalent term.
pub fn print_term(term: &Term) -> String {
    term.to_string()
}

pub fn print_lam(file: &LamFile) -> String {
    let mut out = String::new();
    for (name, t) in &file.defs {
        writeln!(out, "{name} = {t};").unwrap();
    }
    out
}
