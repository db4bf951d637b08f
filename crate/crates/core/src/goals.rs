//! Goals that wait for their arguments.
//!
//! `plus(X,Y,Z)` runs once at least two of its arguments are ground and then
//! computes the third. `safe_not(G)` waits until `G` is ground and then
//! succeeds iff `G` has no solution. Every binding re-examines the suspended
//! goals and runs the ones that became ready before anything else. When the
//! active goals run out while some are still suspended, the branch has
//! floundered: neither success nor failure can be concluded.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::stream::Stream;
use crate::syntax::{parse_goals, Parsed, SyntaxError};
use crate::term::{is_ground, resolve, unify, Substitution, Term, TermPrinter, VarGen};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Goal {
    Unify(Term, Term),
    /// `x + y = z` over integers.
    Plus(Term, Term, Term),
    SafeNot(Box<Goal>),
    /// Peano numerals: `nat(0)`, `nat(s(X)) :- nat(X)`.
    Nat(Term),
}

impl Goal {
    pub fn plus(x: impl Into<Term>, y: impl Into<Term>, z: impl Into<Term>) -> Goal {
        Goal::Plus(x.into(), y.into(), z.into())
    }

    pub fn safe_not(inner: Goal) -> Goal {
        Goal::SafeNot(Box::new(inner))
    }

    pub fn from_term(t: &Term) -> Result<Goal, GoalError> {
        let bad = || GoalError::Unknown(t.to_string());
        match t.functor().ok_or_else(bad)? {
            ("=", [a, b]) => Ok(Goal::Unify(a.clone(), b.clone())),
            ("plus", [x, y, z]) => {
                for arg in [x, y, z] {
                    if !matches!(arg, Term::Int(_) | Term::Var(_)) {
                        return Err(GoalError::PlusArgument(arg.to_string()));
                    }
                }
                Ok(Goal::plus(x.clone(), y.clone(), z.clone()))
            }
            ("safe_not", [g]) => Ok(Goal::safe_not(Goal::from_term(g)?)),
            ("nat", [n]) => Ok(Goal::Nat(n.clone())),
            _ => Err(bad()),
        }
    }

    fn terms(&self) -> Vec<&Term> {
        match self {
            Goal::Unify(a, b) => vec![a, b],
            Goal::Plus(x, y, z) => vec![x, y, z],
            Goal::SafeNot(g) => g.terms(),
            Goal::Nat(t) => vec![t],
        }
    }

    fn max_var(&self) -> Option<u32> {
        self.terms()
            .into_iter()
            .flat_map(|t| t.vars())
            .map(|v| v.0)
            .max()
    }

    fn resolved(&self, s: &Substitution) -> Goal {
        match self {
            Goal::Unify(a, b) => Goal::Unify(resolve(a, s), resolve(b, s)),
            Goal::Plus(x, y, z) => Goal::Plus(resolve(x, s), resolve(y, s), resolve(z, s)),
            Goal::SafeNot(g) => Goal::safe_not(g.resolved(s)),
            Goal::Nat(t) => Goal::Nat(resolve(t, s)),
        }
    }

    /// Whether a suspended goal may run now.
    fn ready(&self, s: &Substitution) -> bool {
        match self {
            Goal::Plus(x, y, z) => [x, y, z].iter().filter(|t| is_ground(t, s)).count() >= 2,
            Goal::SafeNot(g) => g.terms().iter().all(|t| is_ground(t, s)),
            Goal::Unify(..) | Goal::Nat(_) => true,
        }
    }

    pub fn render(&self, p: &mut TermPrinter) -> String {
        match self {
            Goal::Unify(a, b) => format!("{} = {}", p.render(a), p.render(b)),
            Goal::Plus(x, y, z) => format!("plus({},{},{})", p.render(x), p.render(y), p.render(z)),
            Goal::SafeNot(g) => format!("safe_not({})", g.render(p)),
            Goal::Nat(t) => format!("nat({})", p.render(t)),
        }
    }
}

impl fmt::Display for Goal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&mut TermPrinter::new()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GoalError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("unknown goal: {0}")]
    Unknown(String),
    #[error("plus/3 takes integers or variables, got {0}")]
    PlusArgument(String),
}

/// Reads a comma-separated goal list such as `plus(X,1,4), X = 3`.
pub fn parse_goal_list(src: &str, vars: &mut VarGen) -> Result<Parsed<Vec<Goal>>, GoalError> {
    let parsed = parse_goals(src, vars)?;
    let goals = parsed
        .value
        .iter()
        .map(Goal::from_term)
        .collect::<Result<_, _>>()?;
    Ok(Parsed {
        value: goals,
        var_names: parsed.var_names,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Success(Substitution),
    /// Bindings so far and the goals still waiting, resolved.
    Floundered(Substitution, Vec<Goal>),
}

impl SolveOutcome {
    pub fn subst(&self) -> &Substitution {
        match self {
            SolveOutcome::Success(s) | SolveOutcome::Floundered(s, _) => s,
        }
    }

    pub fn is_success(&self) -> bool {
        matches!(self, SolveOutcome::Success(_))
    }
}

#[derive(Clone)]
struct GoalStore {
    active: VecDeque<Goal>,
    suspended: Vec<Goal>,
    subst: Substitution,
    vars: VarGen,
}

impl GoalStore {
    /// Moves every suspended goal whose condition now holds to the front of
    /// the active queue, keeping suspension order.
    fn wake(&mut self) {
        let (ready, waiting): (Vec<Goal>, Vec<Goal>) = std::mem::take(&mut self.suspended)
            .into_iter()
            .partition(|g| g.ready(&self.subst));
        self.suspended = waiting;
        for g in ready.into_iter().rev() {
            self.active.push_front(g);
        }
    }

    fn bind(&mut self, a: &Term, b: &Term) -> bool {
        match unify(a, b, &self.subst) {
            Some(s) => {
                self.subst = s;
                self.wake();
                true
            }
            None => false,
        }
    }
}

fn int_of(t: &Term, s: &Substitution) -> Option<i64> {
    match s.walk(t) {
        Term::Int(n) => Some(*n),
        _ => None,
    }
}

/// Runs a ready `plus`: computes whichever argument is still open, or checks
/// the sum when all three are known.
fn run_plus(store: &mut GoalStore, x: &Term, y: &Term, z: &Term) -> bool {
    let s = &store.subst;
    let (target, value) = if !is_ground(x, s) {
        (
            x,
            int_of(z, s)
                .zip(int_of(y, s))
                .and_then(|(z, y)| z.checked_sub(y)),
        )
    } else if !is_ground(y, s) {
        (
            y,
            int_of(z, s)
                .zip(int_of(x, s))
                .and_then(|(z, x)| z.checked_sub(x)),
        )
    } else {
        (
            z,
            int_of(x, s)
                .zip(int_of(y, s))
                .and_then(|(x, y)| x.checked_add(y)),
        )
    };
    match value {
        Some(v) => store.bind(target, &Term::Int(v)),
        None => false,
    }
}

fn peano_zero() -> Term {
    Term::Int(0)
}

fn run_store(mut store: GoalStore) -> Stream<'static, SolveOutcome> {
    loop {
        let Some(goal) = store.active.pop_front() else {
            return Stream::once(if store.suspended.is_empty() {
                SolveOutcome::Success(store.subst)
            } else {
                let pending = store
                    .suspended
                    .iter()
                    .map(|g| g.resolved(&store.subst))
                    .collect();
                SolveOutcome::Floundered(store.subst, pending)
            });
        };
        match goal {
            Goal::Unify(ref a, ref b) => {
                if !store.bind(a, b) {
                    return Stream::empty();
                }
            }
            Goal::Plus(ref x, ref y, ref z) => {
                if !goal.ready(&store.subst) {
                    store.suspended.push(goal);
                } else if !run_plus(&mut store, x, y, z) {
                    return Stream::empty();
                }
            }
            Goal::SafeNot(ref inner) => {
                if !goal.ready(&store.subst) {
                    store.suspended.push(goal);
                    continue;
                }
                let probe = GoalStore {
                    active: VecDeque::from([(**inner).clone()]),
                    suspended: Vec::new(),
                    subst: store.subst.clone(),
                    vars: store.vars.clone(),
                };
                if run_store(probe).any(|o| o.is_success()) {
                    return Stream::empty();
                }
            }
            Goal::Nat(n) => {
                let mut base = store.clone();
                base.active.push_front(Goal::Unify(n.clone(), peano_zero()));
                let mut step = store;
                let pred = step.vars.fresh();
                step.active.push_front(Goal::Nat(pred.clone()));
                step.active
                    .push_front(Goal::Unify(n, Term::compound("s", vec![pred])));
                return Stream::lazy(move || run_store(base)).disj(move || run_store(step));
            }
        }
    }
}

/// Solves `goals` left to right, depth-first, with suspension.
pub fn solve(goals: Vec<Goal>) -> Stream<'static, SolveOutcome> {
    let start = goals
        .iter()
        .filter_map(Goal::max_var)
        .max()
        .map_or(0, |m| m + 1);
    solve_with(goals, Substitution::new(), VarGen::starting_at(start))
}

/// As [`solve`], starting from `subst` and allocating fresh variables from
/// `vars`, which must not reuse any id already in play.
pub fn solve_with(
    goals: Vec<Goal>,
    subst: Substitution,
    vars: VarGen,
) -> Stream<'static, SolveOutcome> {
    run_store(GoalStore {
        active: goals.into(),
        suspended: Vec::new(),
        subst,
        vars,
    })
}
