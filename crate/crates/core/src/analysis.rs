//! Sign analysis of bytecode programs: bounded path enumeration, and a
//! terminating worklist fixpoint that joins all environments reaching a pc.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::bytecode::Program;
use crate::interp::{run, step, ExecError, MachineEnv, PathResult, Successor};
use crate::sign::{JoinSemiLattice, Sign, SignDomain};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Exec(#[from] ExecError),
    #[error("environments with different shapes meet at pc {0}")]
    JoinShapeMismatch(u32),
}

/// The first `limit` abstract paths from pc 0.
pub fn enumerate_paths(
    program: &Program,
    env0: MachineEnv<Sign>,
    limit: usize,
) -> Vec<PathResult<Sign>> {
    run(program, &SignDomain, 0, env0).take_vec(limit)
}

/// Joined environment per reachable pc.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractState {
    pub per_pc: BTreeMap<u32, MachineEnv<Sign>>,
    /// Worklist items processed before stabilising.
    pub iterations: usize,
}

impl AbstractState {
    pub fn get(&self, pc: u32) -> Option<&MachineEnv<Sign>> {
        self.per_pc.get(&pc)
    }
}

impl fmt::Display for AbstractState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (pc, env) in &self.per_pc {
            writeln!(f, "{pc}: {env}")?;
        }
        Ok(())
    }
}

/// Worklist fixpoint. Each successor environment is joined into the entry of
/// its pc; a pc is re-queued only when its entry strictly grows. `return`
/// records its environment and has no successors.
pub fn analyze_fixpoint(
    program: &Program,
    pc0: u32,
    env0: MachineEnv<Sign>,
) -> Result<AbstractState, AnalysisError> {
    if program.get(pc0).is_none() {
        return Err(ExecError::UnknownPc(pc0).into());
    }
    let mut per_pc = BTreeMap::from([(pc0, env0)]);
    let mut queue = VecDeque::from([pc0]);
    let mut iterations = 0;
    while let Some(pc) = queue.pop_front() {
        iterations += 1;
        let env = per_pc[&pc].clone();
        for succ in step(program, &SignDomain, pc, &env)? {
            let Successor::Next(next, incoming) = succ else {
                continue;
            };
            let grown = match per_pc.get(&next) {
                None => Some(incoming),
                Some(old) => {
                    let joined = old
                        .join(&incoming)
                        .ok_or(AnalysisError::JoinShapeMismatch(next))?;
                    (joined != *old).then_some(joined)
                }
            };
            if let Some(env) = grown {
                per_pc.insert(next, env);
                if !queue.contains(&next) {
                    queue.push_back(next);
                }
            }
        }
    }
    Ok(AbstractState { per_pc, iterations })
}
