//! The sign domain: `pos`, `neg`, `0` and `top`, with no explicit bottom
//! (an impossible result is simply the absence of a successor).
//!
//! Arithmetic and comparison are given as clause tables and evaluated by
//! matching rows, the way the relational definitions would be. `false_op` is
//! not tabulated: a comparison may fail exactly when its negation may hold.

use std::fmt;

use thiserror::Error;

use crate::bytecode::{ArithOp, Cmp, Const};
use crate::interp::{ExecError, MachineEnv, ValueDomain};
use crate::stream::Stream;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    Neg,
    Zero,
    Top,
}

impl Sign {
    pub const ALL: [Sign; 4] = [Sign::Pos, Sign::Neg, Sign::Zero, Sign::Top];

    /// Abstraction of a single integer.
    pub fn alpha(n: i64) -> Sign {
        match n.signum() {
            0 => Sign::Zero,
            1 => Sign::Pos,
            _ => Sign::Neg,
        }
    }

    /// Membership of `n` in the concretisation of `self`.
    pub fn contains(self, n: i64) -> bool {
        self == Sign::Top || Sign::alpha(n) == self
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Pos => "pos",
            Sign::Neg => "neg",
            Sign::Zero => "0",
            Sign::Top => "top",
        })
    }
}

pub trait JoinSemiLattice: Sized {
    fn join(&self, other: &Self) -> Option<Self>;
    fn leq(&self, other: &Self) -> bool;
}

/// Least upper bound. `pos`, `neg` and `0` are pairwise incomparable below
/// `top`.
pub fn join(a1: Sign, a2: Sign) -> Sign {
    if a1 == a2 {
        a1
    } else {
        Sign::Top
    }
}

impl JoinSemiLattice for Sign {
    fn join(&self, other: &Sign) -> Option<Sign> {
        Some(join(*self, *other))
    }

    fn leq(&self, other: &Sign) -> bool {
        self == other || *other == Sign::Top
    }
}

/// Pointwise; `None` when stack heights or local counts differ.
impl<V: JoinSemiLattice + Clone> JoinSemiLattice for MachineEnv<V> {
    fn join(&self, other: &Self) -> Option<Self> {
        if self.stack.len() != other.stack.len() || self.locals.len() != other.locals.len() {
            return None;
        }
        let pointwise = |a: &[V], b: &[V]| -> Option<Vec<V>> {
            a.iter().zip(b).map(|(x, y)| x.join(y)).collect()
        };
        Some(MachineEnv {
            stack: pointwise(&self.stack, &other.stack)?,
            locals: pointwise(&self.locals, &other.locals)?,
        })
    }

    fn leq(&self, other: &Self) -> bool {
        self.stack.len() == other.stack.len()
            && self.locals.len() == other.locals.len()
            && self.stack.iter().zip(&other.stack).all(|(a, b)| a.leq(b))
            && self.locals.iter().zip(&other.locals).all(|(a, b)| a.leq(b))
    }
}

/// Argument pattern of a table row.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pat {
    Is(Sign),
    /// Binds anything; `Yield::Second` reads it back.
    Any,
    AnyBut(Sign),
}

impl Pat {
    pub fn matches(self, s: Sign) -> bool {
        match self {
            Pat::Is(x) => x == s,
            Pat::Any => true,
            Pat::AnyBut(x) => x != s,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Yield {
    Const(Sign),
    Second,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OpRow {
    pub first: Pat,
    pub second: Pat,
    pub result: Yield,
}

const fn row(first: Pat, second: Pat, result: Yield) -> OpRow {
    OpRow {
        first,
        second,
        result,
    }
}

use Pat::{Any, AnyBut, Is};
use Sign::{Neg, Pos, Top, Zero};

pub const MUL_TABLE: [OpRow; 8] = [
    row(Is(Zero), Any, Yield::Const(Zero)),
    row(Is(Pos), Any, Yield::Second),
    row(Is(Neg), Is(Zero), Yield::Const(Zero)),
    row(Is(Neg), Is(Pos), Yield::Const(Neg)),
    row(Is(Neg), Is(Neg), Yield::Const(Pos)),
    row(Is(Neg), Is(Top), Yield::Const(Top)),
    row(Is(Top), Is(Zero), Yield::Const(Zero)),
    row(Is(Top), AnyBut(Zero), Yield::Const(Top)),
];

pub const ADD_TABLE: [OpRow; 10] = [
    row(Is(Zero), Any, Yield::Second),
    row(Is(Pos), Is(Zero), Yield::Const(Pos)),
    row(Is(Pos), Is(Pos), Yield::Const(Pos)),
    row(Is(Pos), Is(Neg), Yield::Const(Top)),
    row(Is(Pos), Is(Top), Yield::Const(Top)),
    row(Is(Neg), Is(Zero), Yield::Const(Neg)),
    row(Is(Neg), Is(Pos), Yield::Const(Top)),
    row(Is(Neg), Is(Neg), Yield::Const(Neg)),
    row(Is(Neg), Is(Top), Yield::Const(Top)),
    row(Is(Top), Any, Yield::Const(Top)),
];

/// A row of a comparison table. `Same` matches when both arguments are equal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmpRow {
    Same,
    Args(Pat, Pat),
}

impl CmpRow {
    pub fn matches(self, a1: Sign, a2: Sign) -> bool {
        match self {
            CmpRow::Same => a1 == a2,
            CmpRow::Args(p, q) => p.matches(a1) && q.matches(a2),
        }
    }
}

pub const LE_TABLE: [CmpRow; 6] = [
    CmpRow::Same,
    CmpRow::Args(Is(Top), AnyBut(Top)),
    CmpRow::Args(Is(Neg), AnyBut(Neg)),
    CmpRow::Args(Is(Zero), Is(Pos)),
    CmpRow::Args(Is(Zero), Is(Top)),
    CmpRow::Args(Is(Pos), Is(Top)),
];

pub const GT_TABLE: [CmpRow; 6] = [
    CmpRow::Args(Any, Is(Top)),
    CmpRow::Args(Any, Is(Neg)),
    CmpRow::Args(Is(Pos), Is(Zero)),
    CmpRow::Args(Is(Top), Is(Zero)),
    CmpRow::Args(Is(Pos), Is(Pos)),
    CmpRow::Args(Is(Top), Is(Pos)),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("operator {0} is not supported by the abstract domain")]
pub struct UnsupportedAbstractOp(pub ArithOp);

impl From<UnsupportedAbstractOp> for ExecError {
    fn from(e: UnsupportedAbstractOp) -> Self {
        ExecError::UnsupportedAbstractOp(e.0)
    }
}

pub fn op_table(op: ArithOp) -> Result<&'static [OpRow], UnsupportedAbstractOp> {
    match op {
        ArithOp::Mul => Ok(&MUL_TABLE),
        ArithOp::Add => Ok(&ADD_TABLE),
        ArithOp::Sub => Err(UnsupportedAbstractOp(op)),
    }
}

pub fn cmp_table(cmp: Cmp) -> &'static [CmpRow] {
    match cmp {
        Cmp::Le => &LE_TABLE,
        Cmp::Gt => &GT_TABLE,
    }
}

/// Results of every matching row, in table order.
pub fn op_matches(op: ArithOp, a1: Sign, a2: Sign) -> Result<Vec<Sign>, UnsupportedAbstractOp> {
    Ok(op_table(op)?
        .iter()
        .filter(|r| r.first.matches(a1) && r.second.matches(a2))
        .map(|r| match r.result {
            Yield::Const(s) => s,
            Yield::Second => a2,
        })
        .collect())
}

/// Abstract arithmetic. The tables are total and functional, so exactly one
/// row applies.
pub fn abs_op(op: ArithOp, a1: Sign, a2: Sign) -> Result<Sign, UnsupportedAbstractOp> {
    let results = op_matches(op, a1, a2)?;
    debug_assert_eq!(results.len(), 1, "{a1} {op} {a2}");
    Ok(results[0])
}

pub fn cmp_may_true(cmp: Cmp, a1: Sign, a2: Sign) -> bool {
    cmp_table(cmp).iter().any(|r| r.matches(a1, a2))
}

pub fn cmp_may_false(cmp: Cmp, a1: Sign, a2: Sign) -> bool {
    cmp_may_true(cmp.negated(), a1, a2)
}

/// The sign domain as an interpreter value domain. Integer constants are
/// abstracted with [`Sign::alpha`].
#[derive(Debug, Clone, Copy, Default)]
pub struct SignDomain;

impl ValueDomain for SignDomain {
    type Value = Sign;

    fn inject_const(&self, c: Const) -> Result<Sign, ExecError> {
        Ok(match c {
            Const::Int(n) => Sign::alpha(n),
            Const::Sign(s) => s,
        })
    }

    fn ex_op(&self, op: ArithOp, a1: &Sign, a2: &Sign) -> Result<Stream<'static, Sign>, ExecError> {
        Ok(op_matches(op, *a1, *a2)?.into_iter().collect())
    }

    fn cmp_true(&self, cmp: Cmp, a1: &Sign, a2: &Sign) -> bool {
        cmp_may_true(cmp, *a1, *a2)
    }

    fn cmp_false(&self, cmp: Cmp, a1: &Sign, a2: &Sign) -> bool {
        cmp_may_false(cmp, *a1, *a2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_examples() {
        assert_eq!(abs_op(ArithOp::Mul, Pos, Pos), Ok(Pos));
        assert_eq!(abs_op(ArithOp::Add, Neg, Top), Ok(Top));
        assert_eq!(abs_op(ArithOp::Mul, Zero, Top), Ok(Zero));
        assert_eq!(abs_op(ArithOp::Mul, Neg, Neg), Ok(Pos));
        assert_eq!(abs_op(ArithOp::Add, Pos, Neg), Ok(Top));
        assert_eq!(
            abs_op(ArithOp::Sub, Pos, Neg),
            Err(UnsupportedAbstractOp(ArithOp::Sub))
        );
    }

    #[test]
    fn comparison_examples() {
        assert!(cmp_may_true(Cmp::Le, Pos, Pos));
        assert!(!cmp_may_true(Cmp::Gt, Zero, Zero));
        assert!(cmp_may_true(Cmp::Gt, Top, Pos));
        assert!(cmp_may_false(Cmp::Le, Pos, Pos));
        assert!(cmp_may_false(Cmp::Gt, Neg, Zero));
        assert!(!cmp_may_false(Cmp::Le, Zero, Pos));
    }

    #[test]
    fn join_examples() {
        assert_eq!(join(Pos, Pos), Pos);
        assert_eq!(join(Pos, Neg), Top);
        assert_eq!(join(Zero, Top), Top);
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(Sign::alpha(0), Zero);
        assert_eq!(Sign::alpha(7), Pos);
        assert_eq!(Sign::alpha(-3), Neg);
    }

    #[test]
    fn rendering() {
        let rendered: Vec<String> = Sign::ALL.iter().map(|s| s.to_string()).collect();
        assert_eq!(rendered, ["pos", "neg", "0", "top"]);
    }

    #[test]
    fn env_join_requires_equal_shapes() {
        let a = MachineEnv::new(vec![Pos], vec![]);
        let b = MachineEnv::new(vec![Neg], vec![]);
        assert_eq!(a.join(&b), Some(MachineEnv::new(vec![Top], vec![])));
        assert!(a.leq(&MachineEnv::new(vec![Top], vec![])));
        assert_eq!(a.join(&MachineEnv::new(vec![Pos, Pos], vec![])), None);
    }
}
