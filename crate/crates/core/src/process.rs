//! A CSP-flavoured process calculus with prefix, interleaving and `stop`,
//! its labelled transition relation, trace enumeration and memoised
//! state-space exploration.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::rc::Rc;

use thiserror::Error;

use crate::stream::Stream;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Process {
    Stop,
    Prefix(Rc<str>, Rc<Process>),
    Interleave(Rc<Process>, Rc<Process>),
}

impl Process {
    pub fn prefix(action: &str, cont: Process) -> Process {
        Process::Prefix(action.into(), Rc::new(cont))
    }

    pub fn interleave(left: Process, right: Process) -> Process {
        Process::Interleave(Rc::new(left), Rc::new(right))
    }

    /// Swaps the operands of every interleaving.
    pub fn mirror(&self) -> Process {
        match self {
            Process::Stop => Process::Stop,
            Process::Prefix(a, p) => Process::Prefix(a.clone(), Rc::new(p.mirror())),
            Process::Interleave(l, r) => Process::interleave(r.mirror(), l.mirror()),
        }
    }

    /// Prolog term notation, e.g. `'||'(stop,(b->stop))`.
    pub fn to_term_string(&self) -> String {
        self.term_notation(false)
    }

    fn term_notation(&self, argument: bool) -> String {
        match self {
            Process::Stop => "stop".into(),
            Process::Prefix(a, p) => {
                let s = format!("{}->{}", quote_action(a), p.term_notation(false));
                if argument {
                    format!("({s})")
                } else {
                    s
                }
            }
            Process::Interleave(l, r) => {
                format!("'||'({},{})", l.term_notation(true), r.term_notation(true))
            }
        }
    }
}

fn quote_action(a: &str) -> String {
    let plain = a.chars().next().is_some_and(|c| c.is_ascii_lowercase())
        && a.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    if plain {
        a.to_string()
    } else {
        format!("'{a}'")
    }
}

/// Infix notation: `->` binds tighter than `||`; `||` associates to the left.
impl fmt::Display for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Process::Stop => f.write_str("stop"),
            Process::Prefix(a, p) => match &**p {
                Process::Interleave(..) => write!(f, "{} -> ({p})", quote_action(a)),
                _ => write!(f, "{} -> {p}", quote_action(a)),
            },
            Process::Interleave(l, r) => match &**r {
                Process::Interleave(..) => write!(f, "{l} || ({r})"),
                _ => write!(f, "{l} || {r}"),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("process syntax error at column {column}: {reason}")]
pub struct ProcessSyntaxError {
    pub column: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Name(String),
    Arrow,
    Par,
    Open,
    Close,
    Comma,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, ProcessSyntaxError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        match c {
            _ if c.is_whitespace() => i += 1,
            '-' if chars.get(i + 1) == Some(&'>') => {
                i += 2;
                out.push((start, Tok::Arrow));
            }
            '|' if chars.get(i + 1) == Some(&'|') => {
                i += 2;
                out.push((start, Tok::Par));
            }
            '(' => {
                i += 1;
                out.push((start, Tok::Open));
            }
            ')' => {
                i += 1;
                out.push((start, Tok::Close));
            }
            ',' => {
                i += 1;
                out.push((start, Tok::Comma));
            }
            '\'' => {
                let close =
                    chars[i + 1..]
                        .iter()
                        .position(|&c| c == '\'')
                        .ok_or(ProcessSyntaxError {
                            column: start + 1,
                            reason: "unterminated quoted name".into(),
                        })?;
                out.push((
                    start,
                    Tok::Name(chars[i + 1..i + 1 + close].iter().collect()),
                ));
                i += close + 2;
            }
            _ if c.is_alphanumeric() || c == '_' => {
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((start, Tok::Name(chars[start..i].iter().collect())));
            }
            _ => {
                return Err(ProcessSyntaxError {
                    column: start + 1,
                    reason: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn fail<T>(&self, reason: &str) -> Result<T, ProcessSyntaxError> {
        Err(ProcessSyntaxError {
            column: self.toks.get(self.pos).map_or(self.end, |(c, _)| *c) + 1,
            reason: reason.into(),
        })
    }

    // par := seq ('||' seq)*
    fn par(&mut self) -> Result<Process, ProcessSyntaxError> {
        let mut p = self.seq()?;
        while self.peek() == Some(&Tok::Par) {
            self.pos += 1;
            p = Process::interleave(p, self.seq()?);
        }
        Ok(p)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ProcessSyntaxError> {
        if self.peek() != Some(&tok) {
            return self.fail(&format!("expected `{what}`"));
        }
        self.pos += 1;
        Ok(())
    }

    // seq := name '->' seq | 'stop' | '(' par ')'
    //      | '||' '(' par ',' par ')' | '->' '(' name ',' par ')'
    fn seq(&mut self) -> Result<Process, ProcessSyntaxError> {
        match self.peek().cloned() {
            Some(Tok::Open) => {
                self.pos += 1;
                let p = self.par()?;
                self.expect(Tok::Close, ")")?;
                Ok(p)
            }
            Some(Tok::Name(name))
                if self.toks.get(self.pos + 1).map(|(_, t)| t) == Some(&Tok::Open) =>
            {
                self.pos += 2;
                let p = match name.as_str() {
                    "||" => {
                        let l = self.par()?;
                        self.expect(Tok::Comma, ",")?;
                        Process::interleave(l, self.par()?)
                    }
                    "->" => {
                        let Some(Tok::Name(action)) = self.peek().cloned() else {
                            return self.fail("expected an action");
                        };
                        self.pos += 1;
                        self.expect(Tok::Comma, ",")?;
                        Process::prefix(&action, self.par()?)
                    }
                    _ => {
                        self.pos -= 2;
                        return self.fail("unknown process constructor");
                    }
                };
                self.expect(Tok::Close, ")")?;
                Ok(p)
            }
            Some(Tok::Name(name)) => {
                self.pos += 1;
                if self.peek() == Some(&Tok::Arrow) {
                    self.pos += 1;
                    Ok(Process::prefix(&name, self.seq()?))
                } else if name == "stop" {
                    Ok(Process::Stop)
                } else {
                    self.pos -= 1;
                    self.fail("expected `->` after action")
                }
            }
            _ => self.fail("expected a process"),
        }
    }
}

/// Reads infix notation (`a -> stop || b -> stop`). Prolog term notation
/// (`'||'('->'(a,stop),'->'(b,stop))`) is accepted too.
pub fn parse_process(src: &str) -> Result<Process, ProcessSyntaxError> {
    let mut p = Parser {
        toks: tokenize(src)?,
        pos: 0,
        end: src.chars().count(),
    };
    let proc = p.par()?;
    if p.pos < p.toks.len() {
        return p.fail("trailing input");
    }
    Ok(proc)
}

/// One-step transitions in rule order: a prefix fires its action; an
/// interleaving offers the moves of its left operand, then those of its right.
pub fn transitions(p: &Process) -> Stream<'static, (Rc<str>, Process)> {
    match p {
        Process::Stop => Stream::empty(),
        Process::Prefix(a, cont) => Stream::once((a.clone(), (**cont).clone())),
        Process::Interleave(l, r) => {
            let (l, r) = (l.clone(), r.clone());
            let (l2, r2) = (l.clone(), r.clone());
            transitions(&l)
                .bind(move |(a, l2)| Stream::once((a, Process::Interleave(Rc::new(l2), r.clone()))))
                .disj(move || {
                    transitions(&r2).bind(move |(a, r3)| {
                        Stream::once((a, Process::Interleave(l2.clone(), Rc::new(r3))))
                    })
                })
        }
    }
}

/// Action sequences of length exactly `n`, each paired with the state it
/// reaches, depth-first.
pub fn traces_with_states(p: &Process, n: usize) -> Stream<'static, (Vec<Rc<str>>, Process)> {
    if n == 0 {
        return Stream::once((Vec::new(), p.clone()));
    }
    transitions(p).bind(move |(a, next)| {
        traces_with_states(&next, n - 1).bind(move |(mut rest, end)| {
            rest.insert(0, a.clone());
            Stream::once((rest, end))
        })
    })
}

pub fn traces(p: &Process, n: usize) -> Stream<'static, Vec<Rc<str>>> {
    traces_with_states(p, n).bind(|(t, _)| Stream::once(t))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reachability {
    /// Breadth-first discovery order, starting with the initial process.
    pub states: Vec<Process>,
    pub deadlocks: Vec<Process>,
    /// Calls to [`transitions`] made during exploration.
    pub expansions: usize,
    pub edges: usize,
}

/// Breadth-first exploration with a visited set keyed on structural equality.
pub fn reachable(p: &Process) -> Reachability {
    let mut seen: HashSet<Process> = HashSet::from([p.clone()]);
    let mut states = vec![p.clone()];
    let mut deadlocks = Vec::new();
    let mut queue = VecDeque::from([p.clone()]);
    let mut expansions = 0;
    let mut edges = 0;
    while let Some(state) = queue.pop_front() {
        expansions += 1;
        let mut stuck = true;
        for (_, next) in transitions(&state) {
            stuck = false;
            edges += 1;
            if seen.insert(next.clone()) {
                states.push(next.clone());
                queue.push_back(next);
            }
        }
        if stuck {
            deadlocks.push(state);
        }
    }
    Reachability {
        states,
        deadlocks,
        expansions,
        edges,
    }
}
