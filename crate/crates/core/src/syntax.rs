//! Reader for the textual term notation shared by every front end.
//!
//! Atoms are lowercase identifiers, runs of symbol characters (`<=`, `*`) or
//! quoted (`'>'`); variables start with an uppercase letter or `_`; integers
//! are decimal with an optional leading `-`; compounds are `f(a, ...)` and
//! lists use `[a, b | T]`.

use std::collections::HashMap;

use thiserror::Error;

use crate::term::{Term, VarGen, VarId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at column {column}: {reason}")]
pub struct SyntaxError {
    pub column: usize,
    pub reason: String,
}

pub fn is_symbol_char(c: char) -> bool {
    "+-*/\\^<>=~:.?@#&$".contains(c)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Atom(String),
    Var(String),
    Int(i64),
    Punct(char),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, SyntaxError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |column: usize, reason: &str| SyntaxError {
        column: column + 1,
        reason: reason.to_string(),
    };
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit()
            || (c == '-' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()))
        {
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let n = text
                .parse::<i64>()
                .map_err(|_| err(start, "integer out of range"))?;
            out.push((start, Tok::Int(n)));
        } else if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            if c.is_uppercase() || c == '_' {
                out.push((start, Tok::Var(text)));
            } else {
                out.push((start, Tok::Atom(text)));
            }
        } else if c == '\'' {
            i += 1;
            let mut text = String::new();
            loop {
                match chars.get(i) {
                    None => return Err(err(start, "unterminated quoted atom")),
                    Some('\\') if chars.get(i + 1).is_some() => {
                        text.push(chars[i + 1]);
                        i += 2;
                    }
                    Some('\'') if chars.get(i + 1) == Some(&'\'') => {
                        text.push('\'');
                        i += 2;
                    }
                    Some('\'') => {
                        i += 1;
                        break;
                    }
                    Some(&ch) => {
                        text.push(ch);
                        i += 1;
                    }
                }
            }
            out.push((start, Tok::Atom(text)));
        } else if c == '[' && chars.get(i + 1) == Some(&']') {
            i += 2;
            out.push((start, Tok::Atom("[]".into())));
        } else if "()[],|".contains(c) {
            i += 1;
            out.push((start, Tok::Punct(c)));
        } else if is_symbol_char(c) {
            while i < chars.len() && is_symbol_char(chars[i]) {
                i += 1;
            }
            out.push((start, Tok::Atom(chars[start..i].iter().collect())));
        } else {
            return Err(err(start, &format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

/// A term read from text together with the names of its variables, in order of
/// first appearance.
#[derive(Debug, Clone)]
pub struct Parsed<T> {
    pub value: T,
    pub var_names: Vec<(String, VarId)>,
}

impl<T> Parsed<T> {
    pub fn names(&self) -> impl Iterator<Item = (VarId, &str)> {
        self.var_names.iter().map(|(n, v)| (*v, n.as_str()))
    }
}

struct Reader<'g> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    gen: &'g mut VarGen,
    names: HashMap<String, VarId>,
    order: Vec<(String, VarId)>,
}

impl Reader<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(c, _)| *c) + 1
    }

    fn fail<T>(&self, reason: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError {
            column: self.column(),
            reason: reason.into(),
        })
    }

    fn expect(&mut self, p: char) -> Result<(), SyntaxError> {
        if self.peek() == Some(&Tok::Punct(p)) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(format!("expected `{p}`"))
        }
    }

    fn eat(&mut self, p: char) -> bool {
        let hit = self.peek() == Some(&Tok::Punct(p));
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn term(&mut self) -> Result<Term, SyntaxError> {
        let Some(tok) = self.peek().cloned() else {
            return self.fail("unexpected end of input");
        };
        self.pos += 1;
        match tok {
            Tok::Int(n) => Ok(Term::Int(n)),
            Tok::Var(name) if name == "_" => Ok(self.gen.fresh()),
            Tok::Var(name) => {
                let v = match self.names.get(&name) {
                    Some(v) => *v,
                    None => {
                        let v = self.gen.fresh_id();
                        self.names.insert(name.clone(), v);
                        self.order.push((name, v));
                        v
                    }
                };
                Ok(Term::Var(v))
            }
            Tok::Atom(name) => {
                if self.eat('(') {
                    let mut args = vec![self.term()?];
                    while self.eat(',') {
                        args.push(self.term()?);
                    }
                    self.expect(')')?;
                    Ok(Term::compound(&name, args))
                } else {
                    Ok(Term::atom(&name))
                }
            }
            Tok::Punct('[') => {
                let mut items = vec![self.term()?];
                while self.eat(',') {
                    items.push(self.term()?);
                }
                let tail = if self.eat('|') {
                    self.term()?
                } else {
                    Term::nil()
                };
                self.expect(']')?;
                Ok(items
                    .into_iter()
                    .rev()
                    .fold(tail, |t, h| Term::compound(crate::term::CONS, vec![h, t])))
            }
            Tok::Punct('(') => {
                let t = self.term()?;
                self.expect(')')?;
                Ok(t)
            }
            Tok::Punct(c) => {
                self.pos -= 1;
                self.fail(format!("unexpected `{c}`"))
            }
        }
    }

    fn finish<T>(self, value: T) -> Result<Parsed<T>, SyntaxError> {
        if self.pos < self.toks.len() {
            return self.fail("trailing input");
        }
        Ok(Parsed {
            value,
            var_names: self.order,
        })
    }
}

fn reader<'g>(src: &str, gen: &'g mut VarGen) -> Result<Reader<'g>, SyntaxError> {
    Ok(Reader {
        toks: tokenize(src)?,
        pos: 0,
        end: src.chars().count(),
        gen,
        names: HashMap::new(),
        order: Vec::new(),
    })
}

/// Reads exactly one term.
pub fn parse_term(src: &str, gen: &mut VarGen) -> Result<Parsed<Term>, SyntaxError> {
    let mut r = reader(src, gen)?;
    let t = r.term()?;
    r.finish(t)
}

/// Reads a comma-separated conjunction of goals. A goal is a term, or
/// `Lhs = Rhs`, which is returned as the compound `=(Lhs, Rhs)`.
pub fn parse_goals(src: &str, gen: &mut VarGen) -> Result<Parsed<Vec<Term>>, SyntaxError> {
    let mut r = reader(src, gen)?;
    let mut goals = Vec::new();
    loop {
        let lhs = r.term()?;
        if r.peek() == Some(&Tok::Atom("=".into())) {
            r.pos += 1;
            let rhs = r.term()?;
            goals.push(Term::compound("=", vec![lhs, rhs]));
        } else {
            goals.push(lhs);
        }
        if !r.eat(',') {
            break;
        }
    }
    r.finish(goals)
}
