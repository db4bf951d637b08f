//! An independent Martelli-Montanari solver and, for generality, every ground
//! unifier drawn from a small universe.

use std::collections::BTreeMap;

use analysis_kit::term::{is_ground, resolve, unify, Substitution, Term, VarId};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub const VARS: [VarId; 3] = [VarId(0), VarId(1), VarId(2)];

fn leaf() -> impl Strategy<Value = Term> {
    prop_oneof![
        3 => (0u32..3).prop_map(|v| Term::Var(VarId(v))),
        1 => prop_oneof![Just(Term::atom("a")), Just(Term::atom("b"))],
        1 => (0i64..2).prop_map(Term::Int),
    ]
}

pub fn term() -> impl Strategy<Value = Term> {
    leaf().prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| Term::compound("f", vec![t])),
            (inner.clone(), inner).prop_map(|(x, y)| Term::compound("g", vec![x, y])),
        ]
    })
}

fn subst_var(t: &Term, v: VarId, by: &Term) -> Term {
    match t {
        Term::Var(w) if *w == v => by.clone(),
        Term::Compound(f, args) => Term::compound(
            f,
            args.iter().map(|a| subst_var(a, v, by)).collect::<Vec<_>>(),
        ),
        _ => t.clone(),
    }
}

/// Solved form `{v ↦ t}` with no domain variable occurring in any `t`.
pub fn martelli_montanari(t1: &Term, t2: &Term) -> Option<BTreeMap<VarId, Term>> {
    let mut eqs = vec![(t1.clone(), t2.clone())];
    let mut solved: BTreeMap<VarId, Term> = BTreeMap::new();
    while let Some((l, r)) = eqs.pop() {
        match (l, r) {
            (Term::Var(a), Term::Var(b)) if a == b => {}
            (Term::Var(v), t) | (t, Term::Var(v)) => {
                if t.vars().contains(&v) {
                    return None;
                }
                for (a, b) in eqs.iter_mut() {
                    *a = subst_var(a, v, &t);
                    *b = subst_var(b, v, &t);
                }
                for u in solved.values_mut() {
                    *u = subst_var(u, v, &t);
                }
                solved.insert(v, t);
            }
            (Term::Compound(f, xs), Term::Compound(g, ys)) => {
                if f != g || xs.len() != ys.len() {
                    return None;
                }
                eqs.extend(xs.iter().cloned().zip(ys.iter().cloned()));
            }
            (a, b) => {
                if a != b {
                    return None;
                }
            }
        }
    }
    Some(solved)
}

pub fn apply(t: &Term, m: &BTreeMap<VarId, Term>) -> Term {
    match t {
        Term::Var(v) => m.get(v).cloned().unwrap_or_else(|| t.clone()),
        Term::Compound(f, args) => {
            Term::compound(f, args.iter().map(|a| apply(a, m)).collect::<Vec<_>>())
        }
        _ => t.clone(),
    }
}

fn is_variant(
    a: &Term,
    b: &Term,
    fwd: &mut BTreeMap<VarId, VarId>,
    back: &mut BTreeMap<VarId, VarId>,
) -> bool {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => {
            *fwd.entry(*x).or_insert(*y) == *y && *back.entry(*y).or_insert(*x) == *x
        }
        (Term::Compound(f, xs), Term::Compound(g, ys)) => {
            f == g
                && xs.len() == ys.len()
                && xs
                    .iter()
                    .zip(ys.iter())
                    .all(|(x, y)| is_variant(x, y, fwd, back))
        }
        _ => a == b,
    }
}

fn image(f: impl Fn(&Term) -> Term) -> Term {
    Term::compound(
        "h",
        VARS.iter().map(|v| f(&Term::Var(*v))).collect::<Vec<_>>(),
    )
}

pub fn ground_assignments() -> Vec<BTreeMap<VarId, Term>> {
    let base = [Term::atom("a"), Term::atom("b"), Term::Int(0), Term::Int(1)];
    let mut u = base.to_vec();
    u.extend(base.iter().map(|t| Term::compound("f", vec![t.clone()])));
    u.push(Term::compound("g", vec![Term::atom("a"), Term::atom("b")]));
    let mut out = Vec::new();
    for x in &u {
        for y in &u {
            for z in &u {
                out.push(BTreeMap::from([
                    (VARS[0], x.clone()),
                    (VARS[1], y.clone()),
                    (VARS[2], z.clone()),
                ]));
            }
        }
    }
    out
}

/// Agreement with the oracle, equalising, idempotence, symmetry and
/// generality for one pair.
pub fn check_pair(
    t1: &Term,
    t2: &Term,
    ground: &[BTreeMap<VarId, Term>],
) -> Result<(), TestCaseError> {
    let e = Substitution::new();
    let ours = unify(t1, t2, &e);
    let oracle = martelli_montanari(t1, t2);
    prop_assert_eq!(ours.is_some(), oracle.is_some(), "{} = {}", t1, t2);
    prop_assert_eq!(ours.is_some(), unify(t2, t1, &e).is_some());
    if let (Some(s), Some(m)) = (&ours, &oracle) {
        let a = image(|t| resolve(t, s));
        let b = image(|t| apply(t, m));
        prop_assert!(
            is_variant(&a, &b, &mut BTreeMap::new(), &mut BTreeMap::new()),
            "{} vs {}",
            a,
            b
        );
        prop_assert_eq!(resolve(t1, s), resolve(t2, s));
        for (v, _) in s.iter() {
            let r = resolve(&Term::Var(v), s);
            // no bound variable survives resolution, so it reached a fixpoint
            prop_assert!(r.vars().iter().all(|w| s.get(*w).is_none()));
            prop_assert!(!r.vars().contains(&v));
        }
    }
    for u in ground {
        if apply(t1, u) != apply(t2, u) {
            continue;
        }
        let Some(s) = &ours else {
            return Err(TestCaseError::fail(format!(
                "{t1} and {t2} have a unifier but unify failed"
            )));
        };
        // u is an instance of s: u = u ∘ s on every variable
        for v in VARS {
            let via = apply(&resolve(&Term::Var(v), s), u);
            prop_assert!(is_ground(&via, &e));
            prop_assert_eq!(&via, &u[&v]);
        }
    }
    Ok(())
}
