use std::io;
use std::process::ExitCode;

use cauchy_dos_cli::{run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = io::stdout().lock();
    let mut stderr = io::stderr();
    match run(&cli, &mut stdout, &mut stderr) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if let Some(advice) = e.advice() {
                eprintln!("hint: {advice}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
