mod args;
mod commands;
mod input;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Format};
use commands::Outcome;

fn init_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("POWERCONE_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| format!("POWERCONE_THREADS must be a positive integer, got {v:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let wants_text = std::env::args().any(|a| a == "text");
            output::error("usage", &e.render().to_string(), if wants_text { Format::Text } else { Format::Json });
            return ExitCode::from(1);
        }
    };
    if let Err(msg) = init_threads() {
        output::error("usage", &msg, cli.config.format);
        return ExitCode::from(1);
    }
    match commands::run(&cli.command, &cli.config) {
        Ok((value, outcome)) => {
            output::emit(cli.command.name(), &value, cli.config.format);
            match outcome {
                Outcome::Decisive => ExitCode::SUCCESS,
                Outcome::Inconclusive => ExitCode::from(2),
            }
        }
        Err(e) => {
            output::error(output::error_kind(&e), &e.to_string(), cli.config.format);
            ExitCode::from(1)
        }
    }
}
