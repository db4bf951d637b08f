use std::collections::BTreeSet;

use analysis_kit::goals::{solve, Goal};
use analysis_kit::term::{resolve, Term, TermPrinter, VarId};
use proptest::prelude::*;

pub const VARS: u32 = 4;

pub fn arg() -> impl Strategy<Value = Term> {
    prop_oneof![
        2 => (0..VARS).prop_map(|v| Term::Var(VarId(v))),
        1 => (-3i64..=3).prop_map(Term::Int),
    ]
}

pub fn goal() -> impl Strategy<Value = Goal> {
    prop_oneof![
        3 => (arg(), arg(), arg()).prop_map(|(x, y, z)| Goal::plus(x, y, z)),
        1 => ((0..VARS).prop_map(|v| Term::Var(VarId(v))), arg()).prop_map(|(x, y)| Goal::Unify(x, y)),
    ]
}

pub fn system() -> impl Strategy<Value = (Vec<Goal>, Vec<Goal>)> {
    prop::collection::vec(goal(), 1..6)
        .prop_flat_map(|gs| (Just(gs.clone()), Just(gs).prop_shuffle()))
}

/// Resolved query variables of each successful outcome, with unbound
/// variables renamed canonically.
pub fn successes(goals: Vec<Goal>) -> BTreeSet<String> {
    let query = Term::compound(
        "q",
        (0..VARS).map(|v| Term::Var(VarId(v))).collect::<Vec<_>>(),
    );
    solve(goals)
        .take_vec(20)
        .iter()
        .filter(|o| o.is_success())
        .map(|o| TermPrinter::new().render(&resolve(&query, o.subst())))
        .collect()
}
