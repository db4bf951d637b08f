//! One interpreter for the bytecode subset, parameterised by a value domain.
//!
//! With the concrete domain every step has exactly one successor. With an
//! abstract domain a conditional may take both branches, and the run becomes a
//! stream of paths enumerated depth-first, false branch first.

use std::fmt;
use std::rc::Rc;

use thiserror::Error;

use crate::bytecode::{ArithOp, Cmp, Const, Opcode, Program};
use crate::stream::Stream;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExecError {
    #[error("*** Could not pop from stack: {env}")]
    StackUnderflow { pc: u32, env: String },
    #[error("operator {0} is not supported by the abstract domain")]
    UnsupportedAbstractOp(ArithOp),
    #[error("constant {0} is not a value of this domain")]
    UnsupportedConst(Const),
    #[error("arithmetic overflow in {a1} {op} {a2}")]
    Overflow { op: ArithOp, a1: i64, a2: i64 },
    #[error("no instruction at pc {0}")]
    UnknownPc(u32),
}

/// Operand stack (index 0 is the top) and local variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MachineEnv<V> {
    pub stack: Vec<V>,
    pub locals: Vec<V>,
}

impl<V> Default for MachineEnv<V> {
    fn default() -> Self {
        MachineEnv {
            stack: Vec::new(),
            locals: Vec::new(),
        }
    }
}

impl<V: Clone> MachineEnv<V> {
    pub fn new(stack: Vec<V>, locals: Vec<V>) -> Self {
        MachineEnv { stack, locals }
    }

    pub fn push(&self, v: V) -> Self {
        let mut stack = Vec::with_capacity(self.stack.len() + 1);
        stack.push(v);
        stack.extend(self.stack.iter().cloned());
        MachineEnv {
            stack,
            locals: self.locals.clone(),
        }
    }

    pub fn pop(&self) -> Option<(V, Self)> {
        let (top, rest) = self.stack.split_first()?;
        Some((
            top.clone(),
            MachineEnv {
                stack: rest.to_vec(),
                locals: self.locals.clone(),
            },
        ))
    }

    pub fn top(&self) -> Option<&V> {
        self.stack.first()
    }
}

fn write_list<V: fmt::Display>(f: &mut fmt::Formatter<'_>, xs: &[V]) -> fmt::Result {
    f.write_str("[")?;
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    f.write_str("]")
}

impl<V: fmt::Display> fmt::Display for MachineEnv<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("env(")?;
        write_list(f, &self.stack)?;
        f.write_str(",")?;
        write_list(f, &self.locals)?;
        f.write_str(")")
    }
}

/// The value-level operations the interpreter needs.
pub trait ValueDomain {
    type Value: Clone + fmt::Display + PartialEq + 'static;

    fn inject_const(&self, c: Const) -> Result<Self::Value, ExecError>;

    /// Results of `a1 op a2`, where `a1` was the top of the stack.
    fn ex_op(
        &self,
        op: ArithOp,
        a1: &Self::Value,
        a2: &Self::Value,
    ) -> Result<Stream<'static, Self::Value>, ExecError>;

    /// `a1 cmp a2` may hold.
    fn cmp_true(&self, cmp: Cmp, a1: &Self::Value, a2: &Self::Value) -> bool;

    /// `a1 cmp a2` may fail.
    fn cmp_false(&self, cmp: Cmp, a1: &Self::Value, a2: &Self::Value) -> bool;
}

/// Machine integers.
#[derive(Debug, Clone, Copy, Default)]
pub struct Concrete;

impl ValueDomain for Concrete {
    type Value = i64;

    fn inject_const(&self, c: Const) -> Result<i64, ExecError> {
        match c {
            Const::Int(n) => Ok(n),
            other => Err(ExecError::UnsupportedConst(other)),
        }
    }

    fn ex_op(&self, op: ArithOp, a1: &i64, a2: &i64) -> Result<Stream<'static, i64>, ExecError> {
        let r = match op {
            ArithOp::Mul => a1.checked_mul(*a2),
            ArithOp::Add => a1.checked_add(*a2),
            ArithOp::Sub => a1.checked_sub(*a2),
        };
        r.map(Stream::once).ok_or(ExecError::Overflow {
            op,
            a1: *a1,
            a2: *a2,
        })
    }

    fn cmp_true(&self, cmp: Cmp, a1: &i64, a2: &i64) -> bool {
        cmp.holds(*a1, *a2)
    }

    fn cmp_false(&self, cmp: Cmp, a1: &i64, a2: &i64) -> bool {
        !cmp.holds(*a1, *a2)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Successor<V> {
    Next(u32, MachineEnv<V>),
    Halt(MachineEnv<V>),
}

fn pop<V: Clone + fmt::Display>(
    pc: u32,
    env: &MachineEnv<V>,
) -> Result<(V, MachineEnv<V>), ExecError> {
    env.pop().ok_or_else(|| ExecError::StackUnderflow {
        pc,
        env: env.to_string(),
    })
}

/// Successors of executing the instruction at `pc` in `env`.
pub fn step<D: ValueDomain>(
    program: &Program,
    domain: &D,
    pc: u32,
    env: &MachineEnv<D::Value>,
) -> Result<Stream<'static, Successor<D::Value>>, ExecError> {
    let ins = program.get(pc).ok_or(ExecError::UnknownPc(pc))?;
    let next = ins.next_pc();
    match ins.opcode {
        Opcode::IConst(c) => Ok(Stream::once(Successor::Next(
            next,
            env.push(domain.inject_const(c)?),
        ))),
        Opcode::Dup => {
            let top = env
                .top()
                .cloned()
                .ok_or_else(|| ExecError::StackUnderflow {
                    pc,
                    env: env.to_string(),
                })?;
            Ok(Stream::once(Successor::Next(next, env.push(top))))
        }
        Opcode::IOp(op) => {
            let (v1, env1) = pop(pc, env)?;
            let (v2, env2) = pop(pc, &env1)?;
            let results = domain.ex_op(op, &v1, &v2)?;
            Ok(results.bind(move |r| Stream::once(Successor::Next(next, env2.push(r)))))
        }
        Opcode::If1 { cmp, value, target } => {
            let (v, rest) = pop(pc, env)?;
            let c = domain.inject_const(value)?;
            let mut out = Vec::with_capacity(2);
            if domain.cmp_false(cmp, &v, &c) {
                out.push(Successor::Next(next, rest.clone()));
            }
            if domain.cmp_true(cmp, &v, &c) {
                out.push(Successor::Next(target, rest));
            }
            Ok(out.into_iter().collect())
        }
        Opcode::Return => Ok(Stream::once(Successor::Halt(env.clone()))),
    }
}

/// One executed instruction: its pc, the environment before it ran, and the
/// opcode.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry<V> {
    pub pc: u32,
    pub env: MachineEnv<V>,
    pub opcode: Opcode,
}

impl<V: fmt::Display> fmt::Display for TraceEntry<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "> {}  {}  --> {}", self.pc, self.env, self.opcode)
    }
}

struct TraceNode<V> {
    entry: TraceEntry<V>,
    prev: Option<Rc<TraceNode<V>>>,
    len: usize,
}

/// Persistent trace. Paths forked at a branch share the prefix up to it, which
/// lets a printer show only what a path added after its last choice point.
pub struct Trace<V>(Option<Rc<TraceNode<V>>>);

impl<V> Clone for Trace<V> {
    fn clone(&self) -> Self {
        Trace(self.0.clone())
    }
}

impl<V> Default for Trace<V> {
    fn default() -> Self {
        Trace(None)
    }
}

impl<V: fmt::Debug> fmt::Debug for Trace<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries()).finish()
    }
}

impl<V> Trace<V> {
    pub fn len(&self) -> usize {
        self.0.as_ref().map_or(0, |n| n.len)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_none()
    }

    pub fn push(&self, entry: TraceEntry<V>) -> Trace<V> {
        Trace(Some(Rc::new(TraceNode {
            entry,
            prev: self.0.clone(),
            len: self.len() + 1,
        })))
    }

    /// Entries in execution order.
    pub fn entries(&self) -> Vec<&TraceEntry<V>> {
        let mut out = Vec::with_capacity(self.len());
        let mut cur = self.0.as_deref();
        while let Some(node) = cur {
            out.push(&node.entry);
            cur = node.prev.as_deref();
        }
        out.reverse();
        out
    }

    pub fn pcs(&self) -> Vec<u32> {
        self.entries().iter().map(|e| e.pc).collect()
    }

    /// Number of leading entries physically shared with `other`.
    pub fn shared_prefix_len(&self, other: &Trace<V>) -> usize {
        let (mut a, mut b) = (self.0.clone(), other.0.clone());
        loop {
            match (&a, &b) {
                (Some(x), Some(y)) if Rc::ptr_eq(x, y) => return x.len,
                (Some(x), Some(y)) => {
                    if x.len >= y.len {
                        a = x.prev.clone();
                    } else {
                        b = y.prev.clone();
                    }
                }
                _ => return 0,
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunSolution<V> {
    pub env: MachineEnv<V>,
    pub trace: Trace<V>,
}

/// A path abandoned because an instruction could not execute.
#[derive(Debug, Clone)]
pub struct PathFailure<V> {
    pub error: ExecError,
    pub trace: Trace<V>,
}

pub type PathResult<V> = Result<RunSolution<V>, PathFailure<V>>;

/// Every path from `pc0`, depth-first, in branch order.
pub fn run<'a, D: ValueDomain>(
    program: &'a Program,
    domain: &'a D,
    pc0: u32,
    env0: MachineEnv<D::Value>,
) -> Stream<'a, PathResult<D::Value>> {
    run_from(program, domain, pc0, env0, Trace::default())
}

fn run_from<'a, D: ValueDomain>(
    program: &'a Program,
    domain: &'a D,
    mut pc: u32,
    mut env: MachineEnv<D::Value>,
    mut trace: Trace<D::Value>,
) -> Stream<'a, PathResult<D::Value>> {
    // straight-line stretches run in this loop; streams nest only at branches
    loop {
        let Some(ins) = program.get(pc) else {
            return Stream::once(Err(PathFailure {
                error: ExecError::UnknownPc(pc),
                trace,
            }));
        };
        let succs = step(program, domain, pc, &env);
        trace = trace.push(TraceEntry {
            pc,
            env,
            opcode: ins.opcode,
        });
        let mut succs: Vec<_> = match succs {
            Ok(s) => s.collect(),
            Err(error) => return Stream::once(Err(PathFailure { error, trace })),
        };
        if succs.len() != 1 {
            return succs
                .into_iter()
                .collect::<Stream<_>>()
                .bind(move |s| match s {
                    Successor::Halt(env) => Stream::once(Ok(RunSolution {
                        env,
                        trace: trace.clone(),
                    })),
                    Successor::Next(next, env) => {
                        let trace = trace.clone();
                        Stream::lazy(move || run_from(program, domain, next, env, trace))
                    }
                });
        }
        match succs.pop().unwrap() {
            Successor::Halt(env) => return Stream::once(Ok(RunSolution { env, trace })),
            Successor::Next(next, next_env) => {
                pc = next;
                env = next_env;
            }
        }
    }
}
