use std::process::ExitCode;

use clap::Parser;
use qprobe_cli::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.run() {
        Ok(manifest) => {
            eprintln!(
                "{} ({}) finished in {:.2} s: {}",
                manifest.command,
                manifest.backend,
                manifest.duration_seconds,
                manifest.outputs.join(", ")
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
