//! Propositional evaluation without negation as failure.
//!
//! Two mutually recursive relations are searched: [`sat`] enumerates bindings
//! that make a formula true and [`nsat`] bindings that make it false. `not`
//! just switches between them, so a negated formula with open variables still
//! produces answers.

use std::fmt;

use thiserror::Error;

use crate::stream::Stream;
use crate::syntax::{parse_term, Parsed, SyntaxError};
use crate::term::{is_ground, resolve, unify, Substitution, Term, VarGen};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    /// An atom `true`/`false` or a variable standing for one.
    Const(Term),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
}

impl Formula {
    pub fn constant(b: bool) -> Formula {
        Formula::Const(Term::atom(if b { "true" } else { "false" }))
    }

    pub fn and(f: Formula, g: Formula) -> Formula {
        Formula::And(Box::new(f), Box::new(g))
    }

    pub fn or(f: Formula, g: Formula) -> Formula {
        Formula::Or(Box::new(f), Box::new(g))
    }

    pub fn negate(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn from_term(t: &Term) -> Result<Formula, FormulaError> {
        let bad = || FormulaError::Unknown(t.to_string());
        match t.functor() {
            Some(("const", [c])) => match c {
                Term::Var(_) => Ok(Formula::Const(c.clone())),
                Term::Atom(a) if &**a == "true" || &**a == "false" => Ok(Formula::Const(c.clone())),
                _ => Err(bad()),
            },
            Some(("and", [f, g])) => {
                Ok(Formula::and(Formula::from_term(f)?, Formula::from_term(g)?))
            }
            Some(("or", [f, g])) => Ok(Formula::or(Formula::from_term(f)?, Formula::from_term(g)?)),
            Some(("not", [f])) => Ok(Formula::negate(Formula::from_term(f)?)),
            _ => Err(bad()),
        }
    }

    /// Replaces constants by their values under `s`.
    pub fn resolved(&self, s: &Substitution) -> Formula {
        match self {
            Formula::Const(t) => Formula::Const(resolve(t, s)),
            Formula::And(f, g) => Formula::and(f.resolved(s), g.resolved(s)),
            Formula::Or(f, g) => Formula::or(f.resolved(s), g.resolved(s)),
            Formula::Not(f) => Formula::negate(f.resolved(s)),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Const(t) => write!(f, "const({t})"),
            Formula::And(a, b) => write!(f, "and({a},{b})"),
            Formula::Or(a, b) => write!(f, "or({a},{b})"),
            Formula::Not(a) => write!(f, "not({a})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("not a propositional formula: {0}")]
    Unknown(String),
    #[error("formula is not ground")]
    NonGround,
}

/// Reads a formula; variables are shared by name.
pub fn parse_formula(src: &str, vars: &mut VarGen) -> Result<Parsed<Formula>, FormulaError> {
    let parsed = parse_term(src, vars)?;
    Ok(Parsed {
        value: Formula::from_term(&parsed.value)?,
        var_names: parsed.var_names,
    })
}

fn bind_const<'a>(t: &Term, value: &str, s: &Substitution) -> Stream<'a, Substitution> {
    match unify(t, &Term::atom(value), s) {
        Some(s) => Stream::once(s),
        None => Stream::empty(),
    }
}

/// Substitutions extending `s` under which `f` is true.
pub fn sat<'a>(f: &'a Formula, s: Substitution) -> Stream<'a, Substitution> {
    match f {
        Formula::Const(t) => bind_const(t, "true", &s),
        Formula::And(a, b) => sat(a, s).bind(move |s| sat(b, s)),
        Formula::Or(a, b) => sat(a, s.clone()).disj(move || sat(b, s)),
        Formula::Not(a) => nsat(a, s),
    }
}

/// Substitutions extending `s` under which `f` is false.
pub fn nsat<'a>(f: &'a Formula, s: Substitution) -> Stream<'a, Substitution> {
    match f {
        Formula::Const(t) => bind_const(t, "false", &s),
        Formula::And(a, b) => nsat(a, s.clone()).disj(move || nsat(b, s)),
        Formula::Or(a, b) => nsat(a, s).bind(move |s| nsat(b, s)),
        Formula::Not(a) => sat(a, s),
    }
}

/// Classical truth value of a ground formula.
pub fn eval_ground(f: &Formula) -> Result<bool, FormulaError> {
    match f {
        Formula::Const(t) if !is_ground(t, &Substitution::new()) => Err(FormulaError::NonGround),
        Formula::Const(t) => Ok(t.is_atom("true")),
        Formula::And(a, b) => Ok(eval_ground(a)? & eval_ground(b)?),
        Formula::Or(a, b) => Ok(eval_ground(a)? | eval_ground(b)?),
        Formula::Not(a) => Ok(!eval_ground(a)?),
    }
}
