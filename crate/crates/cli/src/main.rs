use std::process::ExitCode;

use clap::Parser;

use cayley_fires_cli::config::{resolve_flags, Flags};
use cayley_fires_cli::run_experiment;

fn main() -> ExitCode {
    let flags = Flags::parse();
    let outcome = resolve_flags(flags).and_then(|config| run_experiment(&config));
    match outcome {
        Ok(run) => {
            for check in &run.report.checks {
                println!(
                    "{} {} = {} (threshold {})",
                    if check.passed { "PASS" } else { "FAIL" },
                    check.name,
                    check.statistic,
                    check.threshold
                );
            }
            for file in &run.files {
                eprintln!("wrote {}", file.display());
            }
            ExitCode::from(run.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("fires: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
