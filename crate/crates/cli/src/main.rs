use std::process::ExitCode;

use clap::Parser;
use merodyn_cli::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match merodyn_cli::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
