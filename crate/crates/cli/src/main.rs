use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = ennbo_cli::Cli::parse();
    match ennbo_cli::execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
