//! Rule files.
//!
//! ```text
//! # comment
//! system fig1;
//! generator walk;
//! rule c -> 1/2 c, 1/2 true;
//! ```

use std::fmt::Write as _;

use pars_core::engine::{Atom, Generator, ParsSystem};
use pars_core::{Prob, SubDistribution};

use crate::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Arrow,
    Comma,
    Semi,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn is_word(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '\'' | '/' | '-' | '.')
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut j = 0;
        while j < chars.len() {
            let c = chars[j];
            let (line, column) = (i + 1, j + 1);
            let push = |out: &mut Vec<Spanned>, tok| out.push(Spanned { tok, line, column });
            match c {
                '#' => break,
                c if c.is_whitespace() => j += 1,
                ',' => {
                    push(&mut out, Tok::Comma);
                    j += 1;
                }
                ';' => {
                    push(&mut out, Tok::Semi);
                    j += 1;
                }
                '-' if chars.get(j + 1) == Some(&'>') => {
                    push(&mut out, Tok::Arrow);
                    j += 2;
                }
                c if is_word(c) => {
                    let start = j;
                    while j < chars.len() && is_word(chars[j]) && !(chars[j] == '-' && chars.get(j + 1) == Some(&'>')) {
                        j += 1;
                    }
                    push(&mut out, Tok::Word(chars[start..j].iter().collect()));
                }
                other => return Err(ParseError::new(line, column, format!("unexpected character `{other}`"))),
            }
        }
    }
    Ok(out)
}

struct Cursor {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
}

impl Cursor {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn here(&self) -> (usize, usize) {
        self.peek().map_or(self.end, |s| (s.line, s.column))
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let (line, column) = self.here();
        ParseError::new(line, column, message)
    }

    fn word(&mut self, what: &str) -> Result<(String, usize, usize), ParseError> {
        match self.peek() {
            Some(Spanned { tok: Tok::Word(w), line, column }) => {
                let out = (w.clone(), *line, *column);
                self.pos += 1;
                Ok(out)
            }
            _ => Err(self.error(format!("expected {what}"))),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek().map(|s| &s.tok) == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn eat(&mut self, tok: Tok) -> bool {
        let hit = self.peek().map(|s| &s.tok) == Some(&tok);
        if hit {
            self.pos += 1;
        }
        hit
    }
}

fn element(word: &str, line: usize, column: usize) -> Result<Atom, ParseError> {
    if word.contains('/') {
        return Err(ParseError::new(line, column, format!("`{word}` is not an element name")));
    }
    Ok(Atom::parse(word))
}

/// Parses a rule file. `default_name` is used when there is no `system` line.
pub fn parse_rules(text: &str, default_name: &str) -> Result<ParsSystem, ParseError> {
    let toks = lex(text)?;
    let end = (text.lines().count().max(1), text.lines().last().map_or(1, |l| l.chars().count() + 1));
    let mut cur = Cursor { toks, pos: 0, end };
    let mut sys = ParsSystem::new(default_name);
    while cur.peek().is_some() {
        let (keyword, line, column) = cur.word("`system`, `generator` or `rule`")?;
        match keyword.as_str() {
            "system" => {
                let (name, ..) = cur.word("a system name")?;
                cur.expect(Tok::Semi, "`;`")?;
                sys.name = name;
            }
            "generator" => {
                let (name, l, c) = cur.word("a generator name")?;
                let g = match name.as_str() {
                    "walk" => Generator::Walk,
                    "walk-stop" => Generator::WalkStop,
                    _ => return Err(ParseError::new(l, c, format!("unknown generator `{name}`"))),
                };
                cur.expect(Tok::Semi, "`;`")?;
                sys.set_generator(Some(g));
            }
            "rule" => {
                let (lhs, l, c) = cur.word("an element")?;
                let lhs = element(&lhs, l, c)?;
                cur.expect(Tok::Arrow, "`->`")?;
                let mut pairs = Vec::new();
                loop {
                    let (p, l, c) = cur.word("a probability")?;
                    let p: Prob = p.parse().map_err(|e| ParseError::new(l, c, format!("{e}")))?;
                    let (e, l, c) = cur.word("an element")?;
                    pairs.push((element(&e, l, c)?, p));
                    if !cur.eat(Tok::Comma) {
                        break;
                    }
                }
                cur.expect(Tok::Semi, "`;`")?;
                let rhs = SubDistribution::from_entries(pairs).map_err(|e| ParseError::new(line, column, format!("{e}")))?;
                sys.add_rule(lhs, rhs).map_err(|e| ParseError::new(line, column, format!("{e}")))?;
            }
            other => return Err(ParseError::new(line, column, format!("unknown statement `{other}`"))),
        }
    }
    Ok(sys)
}

/// Canonical text of a system; [`parse_rules`] reads it back unchanged.
pub fn print_rules(sys: &ParsSystem) -> String {
    let mut out = String::new();
    writeln!(out, "system {};", sys.name).unwrap();
    if let Some(g) = sys.generator() {
        writeln!(out, "generator {};", g.name()).unwrap();
    }
    for (lhs, rhs) in sys.explicit_rules() {
        let parts: Vec<String> = rhs.iter().map(|(e, p)| format!("{p} {e}")).collect();
        writeln!(out, "rule {lhs} -> {};", parts.join(", ")).unwrap();
    }
    out
}
