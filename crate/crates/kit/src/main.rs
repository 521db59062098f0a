use std::process::ExitCode;

use clap::Parser;

use onsager_kit::cli::Cli;
use onsager_kit::commands::{run, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = onsager_kit::init_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_USAGE as u8);
    }
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", out.json);
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.status as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}
