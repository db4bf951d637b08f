//! Command-line front end: one command per invocation, or an interactive loop.
//!
//! Answers are printed the way a Prolog top level prints them: bindings such
//! as `X = false`, ` ? ;` when another answer was asked for, and `no` once the
//! answers are exhausted.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::analysis::{analyze_fixpoint, enumerate_paths};
use crate::bytecode::{parse_program, Program};
use crate::corpus::Recorder;
use crate::goals::{parse_goal_list, solve, SolveOutcome};
use crate::interp::{run, Concrete, MachineEnv, PathResult};
use crate::process::{parse_process, reachable, traces_with_states, transitions};
use crate::prop::{nsat, parse_formula, sat};
use crate::term::{resolve, Substitution, Term, TermPrinter, VarGen, VarId};
use crate::types::{infer, parse_expr};

pub mod exit {
    /// At least one answer, or the analysis completed.
    pub const OK: i32 = 0;
    /// No answer, or a type error.
    pub const NO: i32 = 1;
    pub const PARSE: i32 = 2;
    /// Stack underflow, unsupported abstract operator, join shape mismatch.
    pub const ANALYSIS: i32 = 3;
    pub const FLOUNDERED: i32 = 4;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PropMode {
    Sat,
    Nsat,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum ProcCommand {
    /// One-step transitions.
    Step { process: String },
    /// Traces of an exact length.
    Traces {
        process: String,
        #[arg(long, short = 'n')]
        length: usize,
    },
    /// Reachable states and deadlocks.
    Reach { process: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Run a bytecode program over machine integers, printing its trace.
    Run { path: PathBuf },
    /// Enumerate abstract (sign) paths through a bytecode program.
    Paths {
        path: PathBuf,
        #[arg(long, default_value_t = 3)]
        limit: usize,
    },
    /// Per-pc sign environments at the fixpoint.
    Fixpoint { path: PathBuf },
    /// Infer the types of a set/integer formula (text or a file holding it).
    Typecheck { formula: String },
    /// Search for bindings that make a propositional formula true (or false).
    Prop {
        formula: String,
        #[arg(long, value_enum, default_value_t = PropMode::Sat)]
        mode: PropMode,
    },
    /// Explore an interleaving process.
    #[command(subcommand)]
    Proc(ProcCommand),
    /// Solve a goal list with suspension (`plus/3`, `safe_not/1`, `nat/1`, `=`).
    Solve {
        goals: String,
        #[arg(long, default_value_t = 10)]
        limit: usize,
    },
    /// Interactive read-eval-print loop.
    Repl {
        #[arg(long, value_enum, default_value_t = Mode::Prop)]
        mode: Mode,
    },
}

#[derive(Debug, Parser)]
#[command(
    name = "akit",
    version,
    about = "Small program analyses on a logic-programming core"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: i32,
}

impl Output {
    fn new(text: String, code: i32) -> Output {
        Output { text, code }
    }

    fn error(msg: impl std::fmt::Display, code: i32) -> Output {
        Output::new(format!("{msg}\n"), code)
    }
}

fn load_program(path: &Path) -> Result<Program, Output> {
    let text = fs::read_to_string(path)
        .map_err(|e| Output::error(format!("cannot read {}: {e}", path.display()), exit::PARSE))?;
    parse_program(&text).map_err(|e| Output::error(format!("{}: {e}", path.display()), exit::PARSE))
}

/// Prints answer blocks top-level style. `exhausted` means no further answer
/// exists, so the last block also gets ` ? ;` and a final `no` follows.
fn write_answers(out: &mut String, answers: &[Vec<String>], exhausted: bool) {
    for (i, lines) in answers.iter().enumerate() {
        let body = if lines.is_empty() {
            "true".to_string()
        } else {
            lines.join(",\n")
        };
        out.push_str(&body);
        if exhausted || i + 1 < answers.len() {
            out.push_str(" ? ;");
        }
        out.push('\n');
    }
    if exhausted {
        out.push_str("no\n");
    }
}

fn binding_lines(names: &[(String, VarId)], s: &Substitution, p: &mut TermPrinter) -> Vec<String> {
    names
        .iter()
        .filter_map(|(name, v)| {
            let value = resolve(&Term::Var(*v), s);
            (value != Term::Var(*v)).then(|| format!("{name} = {}", p.render(&value)))
        })
        .collect()
}

fn printer_for(names: &[(String, VarId)]) -> TermPrinter {
    TermPrinter::new()
        .quoted()
        .with_names(names.iter().map(|(n, v)| (*v, n.as_str())))
}

fn cmd_run(path: &Path) -> Output {
    let program = match load_program(path) {
        Ok(p) => p,
        Err(o) => return o,
    };
    let mut text = String::new();
    let mut code = exit::NO;
    for item in run(&program, &Concrete, 0, MachineEnv::default()) {
        match item {
            Ok(sol) => {
                for e in sol.trace.entries() {
                    writeln!(text, "{e}").unwrap();
                }
                writeln!(text, "Out = {}", sol.env).unwrap();
                code = exit::OK;
            }
            Err(fail) => {
                for e in fail.trace.entries() {
                    writeln!(text, "{e}").unwrap();
                }
                writeln!(text, "{}", fail.error).unwrap();
                writeln!(text, "no").unwrap();
                if code != exit::OK {
                    code = exit::ANALYSIS;
                }
            }
        }
    }
    Output::new(text, code)
}

fn cmd_paths(path: &Path, limit: usize) -> Output {
    let program = match load_program(path) {
        Ok(p) => p,
        Err(o) => return o,
    };
    let items: Vec<PathResult<_>> = enumerate_paths(&program, MachineEnv::default(), limit);
    let exhausted = items.len() < limit;
    let mut text = String::new();
    let mut prev = None;
    let (mut solutions, mut failures) = (0, 0);
    for (i, item) in items.iter().enumerate() {
        let trace = match item {
            Ok(sol) => &sol.trace,
            Err(fail) => &fail.trace,
        };
        // only what was executed after the last choice point is new output
        let skip = prev.map_or(0, |p| trace.shared_prefix_len(p));
        for e in trace.entries().into_iter().skip(skip) {
            writeln!(text, "{e}").unwrap();
        }
        prev = Some(trace);
        let more = exhausted || i + 1 < items.len();
        match item {
            Ok(sol) => {
                solutions += 1;
                writeln!(text, "R = {}{}", sol.env, if more { " ? ;" } else { "" }).unwrap();
            }
            Err(fail) => {
                failures += 1;
                writeln!(text, "{}", fail.error).unwrap();
            }
        }
    }
    if exhausted {
        text.push_str("no\n");
    }
    let code = if solutions > 0 {
        exit::OK
    } else if failures > 0 {
        exit::ANALYSIS
    } else {
        exit::NO
    };
    Output::new(text, code)
}

fn cmd_fixpoint(path: &Path) -> Output {
    let program = match load_program(path) {
        Ok(p) => p,
        Err(o) => return o,
    };
    match analyze_fixpoint(&program, 0, MachineEnv::default()) {
        Ok(state) => Output::new(state.to_string(), exit::OK),
        Err(e) => Output::error(e, exit::ANALYSIS),
    }
}

fn cmd_typecheck(formula: &str) -> Output {
    let src = match fs::read_to_string(formula) {
        Ok(text) if Path::new(formula).is_file() => text,
        _ => formula.to_string(),
    };
    let expr = match parse_expr(src.trim()) {
        Ok(e) => e,
        Err(e) => return Output::error(e, exit::PARSE),
    };
    match infer(&expr) {
        Ok(typing) => Output::new(format!("{}\n", typing.report()), exit::OK),
        Err(err) => Output::new(format!("{err}\nno\n"), exit::NO),
    }
}

fn cmd_prop(formula: &str, mode: PropMode) -> Output {
    let parsed = match parse_formula(formula, &mut VarGen::new()) {
        Ok(p) => p,
        Err(e) => return Output::error(e, exit::PARSE),
    };
    let stream = match mode {
        PropMode::Sat => sat(&parsed.value, Substitution::new()),
        PropMode::Nsat => nsat(&parsed.value, Substitution::new()),
    };
    let mut p = printer_for(&parsed.var_names);
    let answers: Vec<Vec<String>> = stream
        .map(|s| binding_lines(&parsed.var_names, &s, &mut p))
        .collect();
    let mut text = String::new();
    write_answers(&mut text, &answers, true);
    Output::new(
        text,
        if answers.is_empty() {
            exit::NO
        } else {
            exit::OK
        },
    )
}

fn cmd_proc(cmd: &ProcCommand) -> Output {
    let src = match cmd {
        ProcCommand::Step { process }
        | ProcCommand::Traces { process, .. }
        | ProcCommand::Reach { process } => process,
    };
    let process = match parse_process(src) {
        Ok(p) => p,
        Err(e) => return Output::error(e, exit::PARSE),
    };
    let mut text = String::new();
    match cmd {
        ProcCommand::Step { .. } => {
            let answers: Vec<Vec<String>> = transitions(&process)
                .map(|(a, next)| vec![format!("A = {a}"), format!("R = {}", next.to_term_string())])
                .collect();
            write_answers(&mut text, &answers, true);
            Output::new(
                text,
                if answers.is_empty() {
                    exit::NO
                } else {
                    exit::OK
                },
            )
        }
        ProcCommand::Traces { length, .. } => {
            let answers: Vec<Vec<String>> = traces_with_states(&process, *length)
                .map(|(trace, end)| {
                    let mut lines: Vec<String> = trace
                        .iter()
                        .enumerate()
                        .map(|(i, a)| format!("A{} = {a}", i + 1))
                        .collect();
                    let state = if *length == 0 {
                        "R".to_string()
                    } else {
                        format!("R{length}")
                    };
                    lines.push(format!("{state} = {}", end.to_term_string()));
                    lines
                })
                .collect();
            write_answers(&mut text, &answers, true);
            Output::new(
                text,
                if answers.is_empty() {
                    exit::NO
                } else {
                    exit::OK
                },
            )
        }
        ProcCommand::Reach { .. } => {
            let r = reachable(&process);
            writeln!(text, "states: {}", r.states.len()).unwrap();
            for s in &r.states {
                writeln!(text, "  {}", s.to_term_string()).unwrap();
            }
            writeln!(text, "transitions: {}", r.edges).unwrap();
            writeln!(text, "deadlocks: {}", r.deadlocks.len()).unwrap();
            for s in &r.deadlocks {
                writeln!(text, "  {}", s.to_term_string()).unwrap();
            }
            Output::new(text, exit::OK)
        }
    }
}

fn cmd_solve(goals: &str, limit: usize) -> Output {
    let parsed = match parse_goal_list(goals, &mut VarGen::new()) {
        Ok(p) => p,
        Err(e) => return Output::error(e, exit::PARSE),
    };
    let outcomes = solve(parsed.value).take_vec(limit);
    let mut p = printer_for(&parsed.var_names);
    let answers: Vec<Vec<String>> = outcomes
        .iter()
        .map(|o| {
            let mut lines = binding_lines(&parsed.var_names, o.subst(), &mut p);
            if let SolveOutcome::Floundered(_, pending) = o {
                let goals: Vec<String> = pending.iter().map(|g| g.render(&mut p)).collect();
                lines.push(format!("floundered: {}", goals.join(", ")));
            }
            lines
        })
        .collect();
    let mut text = String::new();
    write_answers(&mut text, &answers, outcomes.len() < limit);
    let code = if outcomes.iter().any(SolveOutcome::is_success) {
        exit::OK
    } else if outcomes.is_empty() {
        exit::NO
    } else {
        exit::FLOUNDERED
    };
    Output::new(text, code)
}

/// Executes one non-interactive command.
pub fn dispatch(cmd: &Command) -> Output {
    match cmd {
        Command::Run { path } => cmd_run(path),
        Command::Paths { path, limit } => cmd_paths(path, *limit),
        Command::Fixpoint { path } => cmd_fixpoint(path),
        Command::Typecheck { formula } => cmd_typecheck(formula),
        Command::Prop { formula, mode } => cmd_prop(formula, *mode),
        Command::Proc(p) => cmd_proc(p),
        Command::Solve { goals, limit } => cmd_solve(goals, *limit),
        Command::Repl { .. } => Output::error("the REPL is interactive; use repl()", exit::PARSE),
    }
}

/// Object language read by the REPL.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Set/integer formulas.
    Type,
    /// Propositional formulas, searched for true instances.
    Prop,
    /// Propositional formulas, searched for false instances.
    Nsat,
    /// Processes; prints one-step transitions.
    Proc,
    /// `<length> <process>`; prints traces.
    Traces,
    /// Processes; prints reachable states.
    Reach,
    /// Goal lists.
    Solve,
    /// Bytecode file paths, run concretely.
    Run,
    /// `<file> [limit]`; abstract paths.
    Paths,
    /// Bytecode file paths; sign fixpoint.
    Fixpoint,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Type => "type",
            Mode::Prop => "prop",
            Mode::Nsat => "nsat",
            Mode::Proc => "proc",
            Mode::Traces => "traces",
            Mode::Reach => "reach",
            Mode::Solve => "solve",
            Mode::Run => "run",
            Mode::Paths => "paths",
            Mode::Fixpoint => "fixpoint",
        }
    }

    pub fn from_name(name: &str) -> Option<Mode> {
        <Mode as ValueEnum>::from_str(name, true).ok()
    }
}

/// The command a REPL line stands for in `mode`.
pub fn line_command(mode: Mode, line: &str) -> Result<Command, String> {
    let line = line.trim();
    let first_and_rest = || {
        let (a, b) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        (a.to_string(), b.trim().to_string())
    };
    Ok(match mode {
        Mode::Type => Command::Typecheck {
            formula: line.into(),
        },
        Mode::Prop => Command::Prop {
            formula: line.into(),
            mode: PropMode::Sat,
        },
        Mode::Nsat => Command::Prop {
            formula: line.into(),
            mode: PropMode::Nsat,
        },
        Mode::Proc => Command::Proc(ProcCommand::Step {
            process: line.into(),
        }),
        Mode::Traces => {
            let (n, process) = first_and_rest();
            let length = n
                .parse()
                .map_err(|_| format!("expected `<length> <process>`, got `{line}`"))?;
            Command::Proc(ProcCommand::Traces { process, length })
        }
        Mode::Reach => Command::Proc(ProcCommand::Reach {
            process: line.into(),
        }),
        Mode::Solve => Command::Solve {
            goals: line.into(),
            limit: 10,
        },
        Mode::Run => Command::Run { path: line.into() },
        Mode::Paths => {
            let (path, limit) = first_and_rest();
            let limit = if limit.is_empty() {
                3
            } else {
                limit.parse().map_err(|_| format!("bad limit `{limit}`"))?
            };
            Command::Paths {
                path: path.into(),
                limit,
            }
        }
        Mode::Fixpoint => Command::Fixpoint { path: line.into() },
    })
}

/// Evaluates one line of object-language input.
pub fn eval_line(mode: Mode, line: &str) -> Output {
    match line_command(mode, line) {
        Ok(cmd) => dispatch(&cmd),
        Err(e) => Output::error(e, exit::PARSE),
    }
}

const REPL_HELP: &str = "\
:mode <type|prop|nsat|proc|traces|reach|solve|run|paths|fixpoint>
:load <file>     evaluate every line of <file> in the current mode
:record <file>   append each evaluated line and its output to <file>
:quit
";

/// Reads lines from `input` until `:quit` or end of input. Errors in a line
/// are reported and the loop continues.
pub fn repl(mut mode: Mode, input: impl BufRead, mut out: impl Write) -> io::Result<()> {
    let mut recorder: Option<Recorder> = None;
    write!(out, "{}> ", mode.name())?;
    out.flush()?;
    for line in input.lines() {
        let line = line?;
        let trimmed = line.trim();
        if let Some(cmd) = trimmed.strip_prefix(':') {
            let (name, arg) = cmd.split_once(char::is_whitespace).unwrap_or((cmd, ""));
            let arg = arg.trim();
            match name {
                "quit" | "q" => return Ok(()),
                "help" => write!(out, "{REPL_HELP}")?,
                "mode" => match Mode::from_name(arg) {
                    Some(m) => mode = m,
                    None => writeln!(out, "unknown mode `{arg}`")?,
                },
                "record" => match Recorder::open(Path::new(arg)) {
                    Ok(r) => {
                        recorder = Some(r);
                        writeln!(out, "recording to {arg}")?;
                    }
                    Err(e) => writeln!(out, "cannot record to {arg}: {e}")?,
                },
                "load" => match fs::read_to_string(arg) {
                    Ok(text) => {
                        for l in text.lines().map(str::trim) {
                            if l.is_empty() || l.starts_with('%') {
                                continue;
                            }
                            let o = eval_line(mode, l);
                            write!(out, "{}", o.text)?;
                            if let Some(r) = recorder.as_mut() {
                                r.record(mode, l, &o.text)?;
                            }
                        }
                    }
                    Err(e) => writeln!(out, "cannot load {arg}: {e}")?,
                },
                _ => writeln!(out, "unknown command `:{name}`; try :help")?,
            }
        } else if !trimmed.is_empty() {
            let o = eval_line(mode, trimmed);
            write!(out, "{}", o.text)?;
            if let Some(r) = recorder.as_mut() {
                r.record(mode, trimmed, &o.text)?;
            }
        }
        write!(out, "{}> ", mode.name())?;
        out.flush()?;
    }
    Ok(())
}
