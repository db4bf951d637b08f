use std::io;
use std::process::ExitCode;

use analysis_kit::cli::{dispatch, repl, Cli, Command};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Command::Repl { mode } = cli.command {
        return match repl(mode, io::stdin().lock(), io::stdout().lock()) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("{e}");
                ExitCode::FAILURE
            }
        };
    }
    let out = dispatch(&cli.command);
    print!("{}", out.text);
    ExitCode::from(out.code as u8)
}
