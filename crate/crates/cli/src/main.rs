mod args;
mod commands;

use clap::Parser;

use args::{Cli, Command, FileConfig};
use commands::CliError;

fn main() {
    // optional cap on internal parallelism; malformed values are a usage
    // error rather than a silent fallback
    if let Ok(raw) = std::env::var("BOSONALG_THREADS") {
        match raw.parse::<usize>() {
            Ok(n) if n >= 1 => {
                // a second initialization (e.g. under a test harness) is
                // harmless: the first pool wins
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("error: BOSONALG_THREADS must be a positive integer, got \"{raw}\"");
                std::process::exit(2);
            }
        }
    }

    let cli = Cli::parse();
    match resolve(cli).and_then(commands::dispatch) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn resolve(cli: Cli) -> Result<Command, CliError> {
    match (cli.config, cli.command) {
        (Some(path), None) => {
            let raw = std::fs::read_to_string(&path).map_err(|e| {
                CliError::Usage(format!("cannot read config {}: {e}", path.display()))
            })?;
            let cfg: FileConfig = serde_json::from_str(&raw)
                .map_err(|e| CliError::Usage(format!("bad config: {e}")))?;
            cfg.into_command().map_err(CliError::Usage)
        }
        (None, Some(cmd)) => Ok(cmd),
        (None, None) => Err(CliError::Usage(
            "a subcommand or --config <FILE> is required (see --help)".into(),
        )),
        (Some(_), Some(_)) => Err(CliError::Usage(
            "--config cannot be combined with a subcommand".into(),
        )),
    }
}
