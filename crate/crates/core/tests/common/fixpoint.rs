//! A bounded path exploration that joins the environment seen at each pc.
//! It has its own stepping code, built only from the sign tables.

use std::collections::BTreeMap;

use analysis_kit::analysis::{analyze_fixpoint, AnalysisError};
use analysis_kit::bytecode::{Const, Opcode, Program};
use analysis_kit::interp::MachineEnv;
use analysis_kit::sign::{abs_op, cmp_may_false, cmp_may_true, join, Sign};

pub type Env = Vec<Sign>; // index 0 is the top of the stack

pub fn lift(c: Const) -> Sign {
    match c {
        Const::Int(n) => Sign::alpha(n),
        Const::Sign(s) => s,
    }
}

/// Every (pc, env) reached within `depth` steps from pc 0, or `None` when a
/// path gets stuck.
pub fn explore(program: &Program, depth: usize) -> Option<Vec<(u32, Env)>> {
    let mut seen = Vec::new();
    let mut stack = vec![(0u32, Env::new(), 0usize)];
    while let Some((pc, env, d)) = stack.pop() {
        seen.push((pc, env.clone()));
        if d == depth {
            continue;
        }
        let ins = program.get(pc)?;
        let next = pc + ins.size;
        match ins.opcode {
            Opcode::IConst(c) => {
                let mut e = env;
                e.insert(0, lift(c));
                stack.push((next, e, d + 1));
            }
            Opcode::Dup => {
                let mut e = env;
                e.insert(0, *e.first()?);
                stack.push((next, e, d + 1));
            }
            Opcode::IOp(op) => {
                if env.len() < 2 {
                    return None;
                }
                let r = abs_op(op, env[0], env[1]).ok()?;
                let mut e = env[2..].to_vec();
                e.insert(0, r);
                stack.push((next, e, d + 1));
            }
            Opcode::If1 { cmp, value, target } => {
                let (&v, rest) = env.split_first()?;
                if cmp_may_true(cmp, v, lift(value)) {
                    stack.push((target, rest.to_vec(), d + 1));
                }
                if cmp_may_false(cmp, v, lift(value)) {
                    stack.push((next, rest.to_vec(), d + 1));
                }
            }
            Opcode::Return => {}
        }
    }
    Some(seen)
}

pub fn joined(seen: &[(u32, Env)]) -> BTreeMap<u32, Env> {
    let mut table: BTreeMap<u32, Env> = BTreeMap::new();
    for (pc, env) in seen {
        table
            .entry(*pc)
            .and_modify(|t| {
                assert_eq!(t.len(), env.len(), "stack height differs at pc {pc}");
                for (a, b) in t.iter_mut().zip(env) {
                    *a = join(*a, *b);
                }
            })
            .or_insert_with(|| env.clone());
    }
    table
}

pub fn table_of(program: &Program) -> Result<BTreeMap<u32, Env>, AnalysisError> {
    let state = analyze_fixpoint(program, 0, MachineEnv::default())?;
    Ok(state
        .per_pc
        .into_iter()
        .map(|(pc, e)| (pc, e.stack))
        .collect())
}
