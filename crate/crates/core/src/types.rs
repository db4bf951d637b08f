//! Unification-based type inference for a small language of sets, integers
//! and predicates.
//!
//! Types are terms: `integer`, `predicate` and `set(T)`. The environment of
//! identifier types is threaded left to right through the formula and an
//! identifier's type is fixed by its first occurrence. Each node has exactly
//! one applicable rule; when that rule's unification fails, inference stops
//! with an error that names the node, the type it was expected to have and the
//! environment at that point.

use std::fmt;

use thiserror::Error;

use crate::syntax::{parse_term, SyntaxError};
use crate::term::{resolve, unify, Substitution, Term, TermPrinter, VarGen, CONS};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    EmptySet,
    Union(Box<Expr>, Box<Expr>),
    Intersect(Box<Expr>, Box<Expr>),
    Plus(Box<Expr>, Box<Expr>),
    InSet(Box<Expr>, Box<Expr>),
    Gt(Box<Expr>, Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Eq(Box<Expr>, Box<Expr>),
    Num(i64),
    /// Non-empty set literal; `[]` is [`Expr::EmptySet`].
    SetLit(Vec<Expr>),
    Ident(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("not a formula: {0}")]
    Unknown(String),
}

impl Expr {
    pub fn from_term(t: &Term) -> Result<Expr, ExprError> {
        let unknown = || ExprError::Unknown(t.to_string());
        match t {
            Term::Int(n) => Ok(Expr::Num(*n)),
            Term::Atom(a) if &**a == crate::term::NIL => Ok(Expr::EmptySet),
            Term::Atom(a) => Ok(Expr::Ident(a.to_string())),
            Term::Var(_) => Err(unknown()),
            Term::Compound(f, args) if &**f == CONS => {
                let mut elems = vec![Expr::from_term(&args[0])?];
                let mut tail = &args[1];
                while let Some((CONS, [h, rest])) = tail.functor() {
                    elems.push(Expr::from_term(h)?);
                    tail = rest;
                }
                if !tail.is_atom(crate::term::NIL) {
                    return Err(unknown());
                }
                Ok(Expr::SetLit(elems))
            }
            Term::Compound(f, args) => {
                let [a, b] = &args[..] else {
                    return Err(unknown());
                };
                let (a, b) = (Box::new(Expr::from_term(a)?), Box::new(Expr::from_term(b)?));
                Ok(match &**f {
                    "union" => Expr::Union(a, b),
                    "intersect" => Expr::Intersect(a, b),
                    "plus" => Expr::Plus(a, b),
                    "in_set" => Expr::InSet(a, b),
                    "gt" => Expr::Gt(a, b),
                    "and" => Expr::And(a, b),
                    "eq" => Expr::Eq(a, b),
                    _ => return Err(unknown()),
                })
            }
        }
    }

    /// Nodes visited by inference. A set literal counts as its chain of list
    /// cells, elements and the closing `[]`.
    pub fn node_count(&self) -> usize {
        match self {
            Expr::EmptySet | Expr::Num(_) | Expr::Ident(_) => 1,
            Expr::SetLit(elems) => 1 + elems.iter().map(|e| 1 + e.node_count()).sum::<usize>(),
            Expr::Union(a, b)
            | Expr::Intersect(a, b)
            | Expr::Plus(a, b)
            | Expr::InSet(a, b)
            | Expr::Gt(a, b)
            | Expr::And(a, b)
            | Expr::Eq(a, b) => 1 + a.node_count() + b.node_count(),
        }
    }
}

pub fn parse_expr(src: &str) -> Result<Expr, ExprError> {
    let term = parse_term(src, &mut VarGen::new())?.value;
    Expr::from_term(&term)
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bin = |f: &mut fmt::Formatter<'_>, name: &str, a: &Expr, b: &Expr| {
            write!(f, "{name}({a},{b})")
        };
        match self {
            Expr::EmptySet => f.write_str("[]"),
            Expr::Union(a, b) => bin(f, "union", a, b),
            Expr::Intersect(a, b) => bin(f, "intersect", a, b),
            Expr::Plus(a, b) => bin(f, "plus", a, b),
            Expr::InSet(a, b) => bin(f, "in_set", a, b),
            Expr::Gt(a, b) => bin(f, "gt", a, b),
            Expr::And(a, b) => bin(f, "and", a, b),
            Expr::Eq(a, b) => bin(f, "eq", a, b),
            Expr::Num(n) => write!(f, "{n}"),
            Expr::SetLit(elems) => {
                f.write_str("[")?;
                for (i, e) in elems.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{e}")?;
                }
                f.write_str("]")
            }
            Expr::Ident(name) => f.write_str(name),
        }
    }
}

fn integer() -> Term {
    Term::atom("integer")
}

fn predicate() -> Term {
    Term::atom("predicate")
}

fn set_of(t: Term) -> Term {
    Term::compound("set", vec![t])
}

/// Identifier types, newest binding first.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TypeEnv {
    bindings: Vec<(String, Term)>,
}

impl TypeEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn lookup(&self, name: &str) -> Option<&Term> {
        self.bindings
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, t)| t)
    }

    fn add(&self, name: &str, ty: Term) -> TypeEnv {
        let mut bindings = Vec::with_capacity(self.bindings.len() + 1);
        bindings.push((name.to_string(), ty));
        bindings.extend(self.bindings.iter().cloned());
        TypeEnv { bindings }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Term)> {
        self.bindings.iter().map(|(n, t)| (n.as_str(), t))
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    /// Every type resolved under `s`.
    pub fn resolved(&self, s: &Substitution) -> TypeEnv {
        TypeEnv {
            bindings: self
                .bindings
                .iter()
                .map(|(n, t)| (n.clone(), resolve(t, s)))
                .collect(),
        }
    }

    pub fn render_with(&self, s: &Substitution, printer: &mut TermPrinter) -> String {
        let items: Vec<String> = self
            .bindings
            .iter()
            .map(|(n, t)| format!("id({n},{})", printer.render(&resolve(t, s))))
            .collect();
        format!("[{}]", items.join(","))
    }
}

/// `[id(name,type),...]`, newest first, unbound type variables numbered
/// `_1`, `_2`, ... in order of appearance.
pub fn render_env(env: &TypeEnv, s: &Substitution) -> String {
    env.render_with(s, &mut TermPrinter::new())
}

#[derive(Debug, Clone)]
pub struct Typing {
    pub ty: Term,
    pub env: TypeEnv,
    pub subst: Substitution,
    /// Rule applications performed.
    pub visits: usize,
}

impl Typing {
    /// `Typing env: ...` followed by `R = <type>`, sharing variable names.
    pub fn report(&self) -> String {
        let mut p = TermPrinter::new();
        let env = self.env.render_with(&self.subst, &mut p);
        let ty = p.render(&resolve(&self.ty, &self.subst));
        format!("Typing env: {env}\nR = {ty}")
    }
}

/// The node whose rule failed, its expected type and the environment at that
/// point, all resolved at the time of failure.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}", self.message())]
pub struct TypeError {
    pub expr: Expr,
    pub expected: Term,
    pub env: TypeEnv,
}

impl TypeError {
    pub fn message(&self) -> String {
        let mut p = TermPrinter::new();
        let expected = p.render(&self.expected);
        let env = self.env.render_with(&Substitution::new(), &mut p);
        format!(
            "Type error for {} (expected: {expected}, Env: {env})",
            self.expr
        )
    }
}

struct Inferencer {
    vars: VarGen,
    subst: Substitution,
    visits: usize,
}

impl Inferencer {
    fn fail(&self, expr: Expr, expected: &Term, env: &TypeEnv) -> TypeError {
        TypeError {
            expr,
            expected: resolve(expected, &self.subst),
            env: env.resolved(&self.subst),
        }
    }

    /// Unifies `expected` with the rule's result type.
    fn head(&mut self, expected: &Term, ty: Term) -> bool {
        match unify(expected, &ty, &self.subst) {
            Some(s) => {
                self.subst = s;
                true
            }
            None => false,
        }
    }

    fn check(&mut self, e: &Expr, expected: &Term, env: TypeEnv) -> Result<TypeEnv, TypeError> {
        self.visits += 1;
        match e {
            Expr::EmptySet => {
                let elem = self.vars.fresh();
                if !self.head(expected, set_of(elem)) {
                    return Err(self.fail(e.clone(), expected, &env));
                }
                Ok(env)
            }
            Expr::Union(a, b) | Expr::Intersect(a, b) => {
                let elem = self.vars.fresh();
                if !self.head(expected, set_of(elem.clone())) {
                    return Err(self.fail(e.clone(), expected, &env));
                }
                let env = self.check(a, &set_of(elem.clone()), env)?;
                self.check(b, &set_of(elem), env)
            }
            Expr::Plus(a, b) => {
                if !self.head(expected, integer()) {
                    return Err(self.fail(e.clone(), expected, &env));
                }
                let env = self.check(a, &integer(), env)?;
                self.check(b, &integer(), env)
            }
            Expr::InSet(a, b) => {
                if !self.head(expected, predicate()) {
                    return Err(self.fail(e.clone(), expected, &env));
                }
                let elem = self.vars.fresh();
                let env = self.check(a, &elem, env)?;
                self.check(b, &set_of(elem), env)
            }
            Expr::Gt(a, b) => {
                if !self.head(expected, predicate()) {
                    return Err(self.fail(e.clone(), expected, &env));
                }
                let env = self.check(a, &integer(), env)?;
                self.check(b, &integer(), env)
            }
            Expr::And(a, b) => {
                if !self.head(expected, predicate()) {
                    return Err(self.fail(e.clone(), expected, &env));
                }
                let env = self.check(a, &predicate(), env)?;
                self.check(b, &predicate(), env)
            }
            Expr::Eq(a, b) => {
                if !self.head(expected, predicate()) {
                    return Err(self.fail(e.clone(), expected, &env));
                }
                let ty = self.vars.fresh();
                let env = self.check(a, &ty, env)?;
                self.check(b, &ty, env)
            }
            Expr::Num(_) => {
                if !self.head(expected, integer()) {
                    return Err(self.fail(e.clone(), expected, &env));
                }
                Ok(env)
            }
            Expr::SetLit(elems) => self.check_cells(elems, expected, env),
            Expr::Ident(name) => match env.lookup(name).cloned() {
                None => Ok(env.add(name, expected.clone())),
                Some(ty) => {
                    if !self.head(expected, ty) {
                        return Err(self.fail(e.clone(), expected, &env));
                    }
                    Ok(env)
                }
            },
        }
    }

    /// `[H|T] : set(TH)` when `H : TH` and `T : set(TH)`; the visit for the
    /// cell itself has already been counted by the caller.
    fn check_cells(
        &mut self,
        elems: &[Expr],
        expected: &Term,
        env: TypeEnv,
    ) -> Result<TypeEnv, TypeError> {
        let (head, rest) = elems.split_first().expect("set literal is non-empty");
        let elem = self.vars.fresh();
        if !self.head(expected, set_of(elem.clone())) {
            return Err(self.fail(Expr::SetLit(elems.to_vec()), expected, &env));
        }
        let env = self.check(head, &elem, env)?;
        if rest.is_empty() {
            self.check(&Expr::EmptySet, &set_of(elem), env)
        } else {
            self.visits += 1;
            self.check_cells(rest, &set_of(elem), env)
        }
    }
}

/// Infers the type of `e` starting from an empty environment.
pub fn infer(e: &Expr) -> Result<Typing, TypeError> {
    let mut inf = Inferencer {
        vars: VarGen::new(),
        subst: Substitution::new(),
        visits: 0,
    };
    let result = inf.vars.fresh();
    let env = inf.check(e, &result, TypeEnv::new())?;
    Ok(Typing {
        ty: result,
        env,
        subst: inf.subst,
        visits: inf.visits,
    })
}
