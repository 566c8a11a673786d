//! `coconvex` command-line front end.
//!
//! Exit status: 0 when the command succeeds or its predicate holds, 1 when
//! the predicate fails, 2 on usage or input errors.

mod args;
mod commands;
mod config;
mod error;
mod inputs;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    match commands::run(&cli) {
        Ok((report, verdict)) => {
            let text = report.finish(verdict, cli.quiet);
            let mut out = std::io::stdout().lock();
            if out.write_all(text.as_bytes()).and_then(|()| out.flush()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::from(verdict.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
