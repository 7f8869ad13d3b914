mod args;
mod commands;
mod error;
mod input;
mod oeis;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::CliResult;

fn run(cli: &Cli) -> (String, CliResult<()>) {
    let done = |r: CliResult<String>| match r {
        Ok(out) => (out, Ok(())),
        Err(e) => (String::new(), Err(e)),
    };
    match &cli.command {
        Command::Fetch(a) => done(commands::fetch(a)),
        Command::Guess(a) => done(commands::guess(a)),
        Command::Genfun(a) => done(commands::genfun(a)),
        Command::Closedform(a) => done(commands::closedform(a)),
        Command::Closure(a) => done(commands::closure(a)),
        Command::Asymptotics(a) => done(commands::asymptotics(a)),
        Command::Prove(a) => commands::prove(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (out, result) = run(&cli);
    let _ = std::io::stdout().write_all(out.as_bytes());
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
