use std::process::ExitCode;

use clap::Parser;
use ringcurrent_cli::args::{Cli, Command};
use ringcurrent_cli::commands::{cmd_simulate, cmd_sweep, cmd_verify};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.exit_code() == 2 {
                eprintln!("\nrun `ringcurrent --help` for usage");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
