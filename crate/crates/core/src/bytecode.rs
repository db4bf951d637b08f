//! Program model for a small Java-bytecode subset, stored as
//! `instr(PC, Opcode, Size)` facts, one per line.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::sign::Sign;
use crate::syntax::parse_term;
use crate::term::{Term, VarGen};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Mul,
    Add,
    Sub,
}

impl fmt::Display for ArithOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ArithOp::Mul => "*",
            ArithOp::Add => "+",
            ArithOp::Sub => "-",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cmp {
    Le,
    Gt,
}

impl Cmp {
    /// The comparison that holds exactly when `self` does not.
    pub fn negated(self) -> Cmp {
        match self {
            Cmp::Le => Cmp::Gt,
            Cmp::Gt => Cmp::Le,
        }
    }

    pub fn holds(self, a: i64, b: i64) -> bool {
        match self {
            Cmp::Le => a <= b,
            Cmp::Gt => a > b,
        }
    }
}

impl fmt::Display for Cmp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Cmp::Le => "<=",
            Cmp::Gt => ">",
        })
    }
}

/// A constant operand as written in the program text. Value domains decide how
/// to interpret it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Const {
    Int(i64),
    Sign(Sign),
}

impl fmt::Display for Const {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Const::Int(n) => write!(f, "{n}"),
            Const::Sign(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Opcode {
    IConst(Const),
    IOp(ArithOp),
    Dup,
    If1 { cmp: Cmp, value: Const, target: u32 },
    Return,
}

impl fmt::Display for Opcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Opcode::IConst(c) => write!(f, "iconst({c})"),
            Opcode::IOp(op) => write!(f, "iop({op})"),
            Opcode::Dup => f.write_str("dup"),
            Opcode::If1 { cmp, value, target } => write!(f, "if1({cmp},{value},{target})"),
            Opcode::Return => f.write_str("return"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Instruction {
    pub pc: u32,
    pub opcode: Opcode,
    pub size: u32,
}

impl Instruction {
    pub fn next_pc(&self) -> u32 {
        self.pc + self.size
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "instr({},{},{}).", self.pc, self.opcode, self.size)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProgramError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("jump or fall-through to missing instruction at pc {0}")]
    InvalidTarget(u32),
}

fn parse_err(line: usize, reason: impl Into<String>) -> ProgramError {
    ProgramError::Parse {
        line,
        reason: reason.into(),
    }
}

/// A validated program: unique pcs, an entry at pc 0, every jump target and
/// fall-through pc present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    instrs: BTreeMap<u32, Instruction>,
}

impl Program {
    pub fn new(instrs: impl IntoIterator<Item = Instruction>) -> Result<Program, ProgramError> {
        let mut map = BTreeMap::new();
        for (i, ins) in instrs.into_iter().enumerate() {
            if map.insert(ins.pc, ins).is_some() {
                return Err(parse_err(i + 1, format!("duplicate pc {}", ins.pc)));
            }
        }
        let program = Program { instrs: map };
        program.validate()?;
        Ok(program)
    }

    fn validate(&self) -> Result<(), ProgramError> {
        if !self.instrs.contains_key(&0) {
            return Err(parse_err(0, "no entry instruction at pc 0"));
        }
        for ins in self.instrs.values() {
            if let Opcode::If1 { target, .. } = ins.opcode {
                if !self.instrs.contains_key(&target) {
                    return Err(ProgramError::InvalidTarget(target));
                }
            }
            if ins.opcode != Opcode::Return && !self.instrs.contains_key(&ins.next_pc()) {
                return Err(ProgramError::InvalidTarget(ins.next_pc()));
            }
        }
        Ok(())
    }

    pub fn get(&self, pc: u32) -> Option<&Instruction> {
        self.instrs.get(&pc)
    }

    pub fn len(&self) -> usize {
        self.instrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instrs.is_empty()
    }

    pub fn instructions(&self) -> impl Iterator<Item = &Instruction> {
        self.instrs.values()
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ins in self.instrs.values() {
            writeln!(f, "{ins}")?;
        }
        Ok(())
    }
}

fn as_u32(t: &Term) -> Option<u32> {
    match t {
        Term::Int(n) => u32::try_from(*n).ok(),
        _ => None,
    }
}

fn parse_const(t: &Term) -> Result<Const, String> {
    match t {
        Term::Int(n) => Ok(Const::Int(*n)),
        Term::Atom(a) => match &**a {
            "pos" => Ok(Const::Sign(Sign::Pos)),
            "neg" => Ok(Const::Sign(Sign::Neg)),
            "top" => Ok(Const::Sign(Sign::Top)),
            other => Err(format!("unknown constant `{other}`")),
        },
        other => Err(format!("unknown constant `{other}`")),
    }
}

fn parse_opcode(t: &Term) -> Result<Opcode, String> {
    let bad = || format!("unknown opcode `{t}`");
    let (name, args) = t.functor().ok_or_else(bad)?;
    match (name, args) {
        ("iconst", [c]) => Ok(Opcode::IConst(parse_const(c)?)),
        ("iop", [op]) => match op.functor() {
            Some(("*", [])) => Ok(Opcode::IOp(ArithOp::Mul)),
            Some(("+", [])) => Ok(Opcode::IOp(ArithOp::Add)),
            Some(("-", [])) => Ok(Opcode::IOp(ArithOp::Sub)),
            _ => Err(format!("unknown operator `{op}`")),
        },
        ("dup", []) => Ok(Opcode::Dup),
        ("return", []) => Ok(Opcode::Return),
        ("if1", [cmp, value, target]) => {
            let cmp = match cmp.functor() {
                Some(("<=", [])) => Cmp::Le,
                Some((">", [])) => Cmp::Gt,
                _ => return Err(format!("unknown comparison `{cmp}`")),
            };
            let target = as_u32(target).ok_or_else(|| format!("bad jump target `{target}`"))?;
            Ok(Opcode::If1 {
                cmp,
                value: parse_const(value)?,
                target,
            })
        }
        _ => Err(bad()),
    }
}

fn parse_line(text: &str) -> Result<Instruction, String> {
    let text = text.strip_suffix('.').unwrap_or(text);
    let fact = parse_term(text, &mut VarGen::new())
        .map_err(|e| e.to_string())?
        .value;
    let Some(("instr", [pc, opcode, size])) = fact.functor() else {
        return Err("expected instr(PC,Opcode,Size)".into());
    };
    let pc = as_u32(pc).ok_or_else(|| format!("bad pc `{pc}`"))?;
    let size = as_u32(size).ok_or_else(|| format!("bad size `{size}`"))?;
    let opcode = parse_opcode(opcode)?;
    if size == 0 && opcode != Opcode::Return {
        return Err(format!("size 0 is only allowed for return (pc {pc})"));
    }
    Ok(Instruction { pc, opcode, size })
}

/// Reads a program in `instr(PC,Opcode,Size).` fact format. Blank lines and
/// lines starting with `%` are ignored.
pub fn parse_program(text: &str) -> Result<Program, ProgramError> {
    let mut instrs = Vec::new();
    let mut seen = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let ins = parse_line(line).map_err(|r| parse_err(idx + 1, r))?;
        if let Some(prev) = seen.insert(ins.pc, idx + 1) {
            return Err(parse_err(
                idx + 1,
                format!("duplicate pc {} (first defined on line {prev})", ins.pc),
            ));
        }
        instrs.push(ins);
    }
    Program::new(instrs)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const COUNTDOWN: &str = "\
instr(0,iconst(2),1).
instr(1,iconst(2),1).
instr(2,iop(*),1).
instr(3,iconst(-1),1).
instr(4,iop(+),1).
instr(5,dup,1).
instr(6,if1('>',0,3),3).
instr(9,return,0).
";

    #[test]
    fn parses_countdown_listing() {
        let p = parse_program(COUNTDOWN).unwrap();
        assert_eq!(p.len(), 8);
        assert!(p.get(0).is_some());
        assert_eq!(
            p.get(6).unwrap().opcode,
            Opcode::If1 {
                cmp: Cmp::Gt,
                value: Const::Int(0),
                target: 3
            }
        );
        assert_eq!(p.get(6).unwrap().opcode.to_string(), "if1(>,0,3)");
        assert_eq!(parse_program(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn empty_input_is_a_parse_error() {
        assert!(matches!(parse_program(""), Err(ProgramError::Parse { .. })));
        assert!(matches!(
            parse_program("% nothing here\n\n"),
            Err(ProgramError::Parse { .. })
        ));
    }

    #[test]
    fn dangling_jump() {
        assert_eq!(
            parse_program("instr(0,if1(>,0,99),3)."),
            Err(ProgramError::InvalidTarget(99))
        );
        assert_eq!(
            parse_program("instr(0,dup,1)."),
            Err(ProgramError::InvalidTarget(1))
        );
    }

    #[test]
    fn malformed_lines_report_line_numbers() {
        let src = "instr(0,iconst(1),1).\n% c\ninstr(1,jsr(4),3).\n";
        assert_eq!(
            parse_program(src),
            Err(ProgramError::Parse {
                line: 3,
                reason: "unknown opcode `jsr(4)`".into()
            })
        );
        let dup = "instr(0,return,0).\ninstr(0,return,0).";
        assert!(matches!(
            parse_program(dup),
            Err(ProgramError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_program("instr(0,dup,0).\n"),
            Err(ProgramError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_program("instr(0,iconst(foo),1)."),
            Err(ProgramError::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn whitespace_insensitive() {
        let p = parse_program("  instr( 0 , iconst( pos ) , 1 ) .\ninstr(1, return, 0)").unwrap();
        assert_eq!(
            p.get(0).unwrap().opcode,
            Opcode::IConst(Const::Sign(Sign::Pos))
        );
    }
}
