//! Logic terms, substitutions and syntactic unification.
//!
//! Substitutions are persistent values: every extension returns a new
//! substitution and leaves the original untouched, so a search procedure can
//! backtrack simply by dropping the branch it no longer needs.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;

/// Functor used for list cells, `'.'(Head, Tail)`.
pub const CONS: &str = ".";
/// Atom used for the empty list.
pub const NIL: &str = "[]";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub u32);

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(VarId),
    Atom(Rc<str>),
    Int(i64),
    Compound(Rc<str>, Rc<[Term]>),
}

impl Term {
    pub fn atom(name: &str) -> Term {
        Term::Atom(name.into())
    }

    pub fn compound(functor: &str, args: impl Into<Vec<Term>>) -> Term {
        let args: Vec<Term> = args.into();
        if args.is_empty() {
            return Term::atom(functor);
        }
        Term::Compound(functor.into(), args.into())
    }

    pub fn nil() -> Term {
        Term::atom(NIL)
    }

    /// Builds a proper list `[a, b, ...]` from its elements.
    pub fn list(items: impl IntoIterator<Item = Term, IntoIter: DoubleEndedIterator>) -> Term {
        items.into_iter().rev().fold(Term::nil(), |tail, head| {
            Term::compound(CONS, vec![head, tail])
        })
    }

    pub fn is_atom(&self, name: &str) -> bool {
        matches!(self, Term::Atom(a) if &**a == name)
    }

    pub fn as_var(&self) -> Option<VarId> {
        match self {
            Term::Var(v) => Some(*v),
            _ => None,
        }
    }

    /// `(functor, args)` for compounds, `(name, [])` for atoms.
    pub fn functor(&self) -> Option<(&str, &[Term])> {
        match self {
            Term::Atom(a) => Some((a, &[])),
            Term::Compound(f, args) => Some((f, args)),
            _ => None,
        }
    }

    /// Variables in left-to-right first-occurrence order, without duplicates.
    pub fn vars(&self) -> Vec<VarId> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<VarId>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(*v);
                }
            }
            Term::Compound(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            _ => {}
        }
    }
}

impl From<i64> for Term {
    fn from(n: i64) -> Self {
        Term::Int(n)
    }
}

/// Allocates fresh variables. One generator per evaluation context.
#[derive(Debug, Default, Clone)]
pub struct VarGen {
    next: u32,
}

impl VarGen {
    pub fn new() -> Self {
        Self::default()
    }

    /// A generator whose variables never collide with ids below `start`.
    pub fn starting_at(start: u32) -> Self {
        VarGen { next: start }
    }

    pub fn fresh_id(&mut self) -> VarId {
        let id = VarId(self.next);
        self.next += 1;
        id
    }

    pub fn fresh(&mut self) -> Term {
        Term::Var(self.fresh_id())
    }
}

/// Triangular substitution from variables to terms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    bindings: BTreeMap<VarId, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn get(&self, v: VarId) -> Option<&Term> {
        self.bindings.get(&v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, &Term)> {
        self.bindings.iter().map(|(v, t)| (*v, t))
    }

    /// Extends with `v ↦ t` without any checks. Callers must guarantee `v` is
    /// unbound and does not occur in `t`.
    fn extended(&self, v: VarId, t: Term) -> Substitution {
        let mut bindings = self.bindings.clone();
        bindings.insert(v, t);
        Substitution { bindings }
    }

    /// Follows variable bindings at the top of `t` only.
    pub fn walk<'a>(&'a self, mut t: &'a Term) -> &'a Term {
        while let Term::Var(v) = t {
            match self.bindings.get(v) {
                Some(bound) => t = bound,
                None => break,
            }
        }
        t
    }

    fn occurs(&self, v: VarId, t: &Term) -> bool {
        match self.walk(t) {
            Term::Var(w) => *w == v,
            Term::Compound(_, args) => args.iter().any(|a| self.occurs(v, a)),
            _ => false,
        }
    }
}

/// Most general unifier of `t1` and `t2` extending `s`, with occurs check.
pub fn unify(t1: &Term, t2: &Term, s: &Substitution) -> Option<Substitution> {
    let mut s = s.clone();
    let mut pending = vec![(t1.clone(), t2.clone())];
    while let Some((a, b)) = pending.pop() {
        let a = s.walk(&a).clone();
        let b = s.walk(&b).clone();
        match (&a, &b) {
            (Term::Var(x), Term::Var(y)) if x == y => {}
            (Term::Var(x), other) | (other, Term::Var(x)) => {
                if s.occurs(*x, other) {
                    return None;
                }
                s = s.extended(*x, other.clone());
            }
            (Term::Atom(x), Term::Atom(y)) if x == y => {}
            (Term::Int(x), Term::Int(y)) if x == y => {}
            (Term::Compound(f, xs), Term::Compound(g, ys)) if f == g && xs.len() == ys.len() => {
                // reversed so that arguments are decomposed left to right
                pending.extend(xs.iter().cloned().zip(ys.iter().cloned()).rev());
            }
            _ => return None,
        }
    }
    Some(s)
}

/// `t` with every bound variable replaced, to fixpoint.
pub fn resolve(t: &Term, s: &Substitution) -> Term {
    match s.walk(t) {
        Term::Compound(f, args) => {
            Term::Compound(f.clone(), args.iter().map(|a| resolve(a, s)).collect())
        }
        other => other.clone(),
    }
}

pub fn is_ground(t: &Term, s: &Substitution) -> bool {
    match s.walk(t) {
        Term::Var(_) => false,
        Term::Compound(_, args) => args.iter().all(|a| is_ground(a, s)),
        _ => true,
    }
}

fn is_plain_atom(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => chars.all(|c| c.is_ascii_alphanumeric() || c == '_'),
        _ => name == NIL || (!name.is_empty() && name.chars().all(crate::syntax::is_symbol_char)),
    }
}

/// Renders terms the way `write/1` would, naming unbound variables either from
/// a caller-supplied table or canonically as `_1`, `_2`, ... in order of first
/// appearance. One printer shares its numbering across all terms it renders.
#[derive(Debug, Default)]
pub struct TermPrinter {
    names: HashMap<VarId, String>,
    next_anon: usize,
    quoted: bool,
}

impl TermPrinter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Quote atoms that would not read back as themselves (`writeq/1` style).
    pub fn quoted(mut self) -> Self {
        self.quoted = true;
        self
    }

    pub fn with_names<'a>(mut self, names: impl IntoIterator<Item = (VarId, &'a str)>) -> Self {
        self.names
            .extend(names.into_iter().map(|(v, n)| (v, n.to_string())));
        self
    }

    pub fn render(&mut self, t: &Term) -> String {
        let mut out = String::new();
        self.write(t, &mut out);
        out
    }

    fn var_name(&mut self, v: VarId) -> String {
        if let Some(n) = self.names.get(&v) {
            return n.clone();
        }
        self.next_anon += 1;
        let name = format!("_{}", self.next_anon);
        self.names.insert(v, name.clone());
        name
    }

    fn write_atom(&self, a: &str, out: &mut String) {
        if self.quoted && !is_plain_atom(a) {
            out.push('\'');
            out.push_str(&a.replace('\'', "\\'"));
            out.push('\'');
        } else {
            out.push_str(a);
        }
    }

    fn write(&mut self, t: &Term, out: &mut String) {
        match t {
            Term::Var(v) => {
                let name = self.var_name(*v);
                out.push_str(&name);
            }
            Term::Atom(a) => self.write_atom(a, out),
            Term::Int(n) => out.push_str(&n.to_string()),
            Term::Compound(f, args) if &**f == CONS && args.len() == 2 => {
                out.push('[');
                self.write(&args[0], out);
                let mut tail = &args[1];
                loop {
                    match tail {
                        Term::Compound(g, rest) if &**g == CONS && rest.len() == 2 => {
                            out.push(',');
                            self.write(&rest[0], out);
                            tail = &rest[1];
                        }
                        Term::Atom(a) if &**a == NIL => break,
                        other => {
                            out.push('|');
                            self.write(other, out);
                            break;
                        }
                    }
                }
                out.push(']');
            }
            Term::Compound(f, args) => {
                self.write_atom(f, out);
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    self.write(a, out);
                }
                out.push(')');
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "_G{}", v.0),
            other => {
                // variables inside compounds keep their raw ids
                let mut p = TermPrinter::new();
                p.names
                    .extend(other.vars().into_iter().map(|v| (v, format!("_G{}", v.0))));
                f.write_str(&p.render(other))
            }
        }
    }
}
