//! Exhaustive checks of the sign tables against every integer with |c| ≤ 25.

use analysis_kit::bytecode::{ArithOp, Cmp};
use analysis_kit::sign::{
    abs_op, cmp_may_false, cmp_may_true, join, op_matches, JoinSemiLattice, Sign,
};

const RANGE: std::ops::RangeInclusive<i64> = -25..=25;
const OPS: [ArithOp; 2] = [ArithOp::Mul, ArithOp::Add];
const CMPS: [Cmp; 2] = [Cmp::Le, Cmp::Gt];

fn gamma(a: Sign) -> Vec<i64> {
    RANGE.filter(|c| a.contains(*c)).collect()
}

fn concrete(op: ArithOp, x: i64, y: i64) -> i64 {
    match op {
        ArithOp::Mul => x * y,
        ArithOp::Add => x + y,
        ArithOp::Sub => x - y,
    }
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// Exactly one table row per pair of signs.
pub fn check_totality() -> Result<(), String> {
    for op in OPS {
        for a1 in Sign::ALL {
            for a2 in Sign::ALL {
                let rows = op_matches(op, a1, a2).map_err(|e| e.to_string())?;
                ensure!(rows.len() == 1, "{op} {a1} {a2}: {rows:?}");
            }
        }
    }
    ensure!(
        abs_op(ArithOp::Sub, Sign::Pos, Sign::Pos).is_err(),
        "- has no abstract table"
    );
    Ok(())
}

pub fn check_arithmetic_soundness() -> Result<(), String> {
    for op in OPS {
        for a1 in Sign::ALL {
            for a2 in Sign::ALL {
                let r = abs_op(op, a1, a2).map_err(|e| e.to_string())?;
                for c1 in gamma(a1) {
                    for c2 in gamma(a2) {
                        let c = concrete(op, c1, c2);
                        ensure!(Sign::alpha(c).leq(&r), "{c1} {op} {c2} = {c} not in {r}");
                    }
                }
            }
        }
    }
    Ok(())
}

/// A comparison may hold (fail) abstractly iff some sampled pair makes it
/// hold (fail).
pub fn check_comparisons() -> Result<(), String> {
    for cmp in CMPS {
        for a1 in Sign::ALL {
            for a2 in Sign::ALL {
                let (mut some_true, mut some_false) = (false, false);
                for c1 in gamma(a1) {
                    for c2 in gamma(a2) {
                        let holds = cmp.holds(c1, c2);
                        some_true |= holds;
                        some_false |= !holds;
                    }
                }
                ensure!(
                    cmp_may_true(cmp, a1, a2) == some_true,
                    "{a1} {cmp} {a2} may hold: expected {some_true}"
                );
                ensure!(
                    cmp_may_false(cmp, a1, a2) == some_false,
                    "{a1} {cmp} {a2} may fail: expected {some_false}"
                );
            }
        }
    }
    Ok(())
}

pub fn check_join_laws() -> Result<(), String> {
    for a in Sign::ALL {
        ensure!(join(a, a) == a, "idempotence at {a}");
        ensure!(a.leq(&Sign::Top), "{a} below top");
        for b in Sign::ALL {
            ensure!(join(a, b) == join(b, a), "commutativity at {a},{b}");
            ensure!(a.leq(&join(a, b)), "upper bound at {a},{b}");
            ensure!(
                a.leq(&b) == (join(a, b) == b),
                "order agrees with join at {a},{b}"
            );
            for c in Sign::ALL {
                ensure!(
                    join(join(a, b), c) == join(a, join(b, c)),
                    "associativity at {a},{b},{c}"
                );
                if a.leq(&c) && b.leq(&c) {
                    ensure!(join(a, b).leq(&c), "join of {a},{b} is not least below {c}");
                }
            }
        }
    }
    Ok(())
}
