use std::process::ExitCode;

use clap::Parser;
use fewroots_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let has_out = match &cli.command {
                fewroots_cli::args::Command::Chambers(a) => a.config.out.is_some(),
                fewroots_cli::args::Command::OddCell(a) | fewroots_cli::args::Command::HkParam(a) => a.out.is_some(),
                fewroots_cli::args::Command::Certify(a) => a.out.is_some(),
                fewroots_cli::args::Command::Haas(a) => a.out.is_some(),
                fewroots_cli::args::Command::Bound(a) => a.out.is_some(),
            };
            if !has_out {
                print!("{}", outcome.json);
            }
            match outcome.partial {
                Some(reason) => {
                    eprintln!("incomplete: {reason}");
                    ExitCode::from(2)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
