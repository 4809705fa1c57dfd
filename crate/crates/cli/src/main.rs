use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = cdiff::args::Cli::parse();
    match cdiff::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
