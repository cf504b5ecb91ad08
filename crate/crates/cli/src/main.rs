use std::process::ExitCode;

use clap::Parser;
use stable_exit::args::Cli;
use stable_exit::{commands, parallel};

fn main() -> ExitCode {
    parallel::configure_threads();
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("stable-exit: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
