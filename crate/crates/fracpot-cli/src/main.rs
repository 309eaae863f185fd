mod config;
mod output;
mod runner;

use std::process::ExitCode;

use clap::Parser;

use runner::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match runner::run(cli) {
        Ok(code) => code,
        Err(err) => {
            // Machine-readable error record on stderr.
            let record = serde_json::json!({
                "error": err.to_string(),
                "kind": "validation",
            });
            eprintln!("{record}");
            ExitCode::from(2)
        }
    }
}
