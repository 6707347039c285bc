//! Experiment runner for fire dynamics on Cayley trees: configuration,
//! deterministic replica execution, CSV/JSON output and verification suites.

pub mod config;
pub mod error;
pub mod report;
pub mod suites;

use std::path::PathBuf;

pub use config::{ExperimentConfig, RegimeSpec, Suite};
pub use error::CliError;
pub use report::SuiteReport;

/// Result of [`run_experiment`]: the report and the files written.
pub struct RunOutcome {
    pub report: SuiteReport,
    pub files: Vec<PathBuf>,
}

impl RunOutcome {
    /// 0 when every check passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.report.passed() {
            0
        } else {
            1
        }
    }
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<RunOutcome, CliError> {
    config.validate()?;
    let report = suites::run_suite(config)?;
    let files = report::write_outputs(&config.output_dir, config, &report)?;
    Ok(RunOutcome { report, files })
}
