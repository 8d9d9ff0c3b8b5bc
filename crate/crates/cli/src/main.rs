use std::process::ExitCode;

use clap::Parser;
use ppi_cli::{main_with, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_with(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ppi: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
