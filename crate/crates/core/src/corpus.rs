//! Recorded REPL sessions.
//!
//! Each entry is a header line `[<mode>] <input> ⟶`, the output lines, and a
//! blank line. Output that is itself empty is written as a header followed
//! directly by the blank line.

use std::fs::{File, OpenOptions};
use std::io::{self, Write};
use std::path::Path;

use thiserror::Error;

use crate::cli::{eval_line, Mode};

const ARROW: &str = " ⟶";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub mode: Mode,
    pub input: String,
    pub expected: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("line {line}: expected `[<mode>] <input> ⟶`")]
    Header { line: usize },
    #[error("line {line}: unknown mode `{mode}`")]
    Mode { line: usize, mode: String },
}

pub struct Recorder {
    file: File,
}

impl Recorder {
    /// Appends to `path`, creating it if needed.
    pub fn open(path: &Path) -> io::Result<Recorder> {
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(Recorder { file })
    }

    pub fn record(&mut self, mode: Mode, input: &str, output: &str) -> io::Result<()> {
        write!(self.file, "{}", format_entry(mode, input, output))
    }
}

pub fn format_entry(mode: Mode, input: &str, output: &str) -> String {
    let mut s = format!("[{}] {}{ARROW}\n", mode.name(), input.trim());
    for line in output.lines() {
        s.push_str(line);
        s.push('\n');
    }
    s.push('\n');
    s
}

pub fn parse(text: &str) -> Result<Vec<Entry>, CorpusError> {
    let mut entries = Vec::new();
    let mut lines = text.lines().enumerate().peekable();
    while let Some((i, line)) = lines.next() {
        if line.trim().is_empty() {
            continue;
        }
        let header = line
            .strip_prefix('[')
            .and_then(|l| l.strip_suffix(ARROW))
            .and_then(|l| l.split_once("] "))
            .ok_or(CorpusError::Header { line: i + 1 })?;
        let mode = Mode::from_name(header.0).ok_or_else(|| CorpusError::Mode {
            line: i + 1,
            mode: header.0.to_string(),
        })?;
        let mut expected = String::new();
        while let Some((_, l)) = lines.next_if(|(_, l)| !l.is_empty()) {
            expected.push_str(l);
            expected.push('\n');
        }
        entries.push(Entry {
            mode,
            input: header.1.to_string(),
            expected,
        });
    }
    Ok(entries)
}

/// Entries whose current output differs from the recorded one, with the
/// actual output.
pub fn check(entries: &[Entry]) -> Vec<(&Entry, String)> {
    entries
        .iter()
        .filter_map(|e| {
            let actual = eval_line(e.mode, &e.input).text;
            (actual != e.expected).then_some((e, actual))
        })
        .collect()
}
