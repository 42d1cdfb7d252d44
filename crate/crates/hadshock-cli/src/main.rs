use std::process::ExitCode;

use clap::Parser;

mod cli;
mod output;

fn main() -> ExitCode {
    let args = cli::Cli::parse();
    if let Err(e) = cli::init_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(e.code());
    }
    match cli::run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
