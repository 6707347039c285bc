//! Per-replica rows, named checks, and the files a run leaves behind.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use cayley_fires::dynamics::DynamicsOutcome;

use crate::config::ExperimentConfig;
use crate::error::CliError;

/// One CSV line: `n,p,replica,I,B,kappa,zeta1,b1..b5,runtime_ns`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicaRow {
    pub n: usize,
    pub p: f64,
    pub replica: u64,
    pub fireproof: usize,
    pub burnt: usize,
    pub kappa: usize,
    /// step of the first ignition, 0 if nothing burns
    pub zeta1: usize,
    pub top_burnt: [usize; 5],
    pub runtime_ns: u64,
}

pub const CSV_HEADER: &str = "n,p,replica,I,B,kappa,zeta1,b1,b2,b3,b4,b5,runtime_ns";

impl ReplicaRow {
    pub fn new(n: usize, p: f64, replica: u64, o: &DynamicsOutcome, runtime_ns: u64) -> Self {
        let mut top_burnt = [0; 5];
        for (slot, &b) in top_burnt.iter_mut().zip(&o.burnt_ranked) {
            *slot = b;
        }
        Self {
            n,
            p,
            replica,
            fireproof: o.fireproof,
            burnt: o.burnt,
            kappa: o.kappa,
            zeta1: o.fire_steps.first().copied().unwrap_or(0),
            top_burnt,
            runtime_ns,
        }
    }

    pub fn csv_line(&self) -> String {
        let b = &self.top_burnt;
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.n, self.p, self.replica, self.fireproof, self.burnt, self.kappa, self.zeta1, b[0], b[1], b[2], b[3], b[4],
            self.runtime_ns
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    Below,
    AtMost,
    AtLeast,
    Holds,
}

/// A pass/fail verdict on one statistic.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub statistic: f64,
    pub threshold: f64,
    pub comparison: Comparison,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn below(name: impl Into<String>, statistic: f64, threshold: f64) -> Self {
        Self::make(name, statistic, threshold, Comparison::Below, statistic < threshold)
    }

    pub fn at_most(name: impl Into<String>, statistic: f64, threshold: f64) -> Self {
        Self::make(name, statistic, threshold, Comparison::AtMost, statistic <= threshold)
    }

    pub fn at_least(name: impl Into<String>, statistic: f64, threshold: f64) -> Self {
        Self::make(name, statistic, threshold, Comparison::AtLeast, statistic >= threshold)
    }

    /// A property without a natural statistic; recorded as 1/0.
    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self::make(name, if ok { 1.0 } else { 0.0 }, 1.0, Comparison::Holds, ok)
    }

    fn make(name: impl Into<String>, statistic: f64, threshold: f64, comparison: Comparison, passed: bool) -> Self {
        Self { name: name.into(), statistic, threshold, comparison, passed, note: None }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Everything one suite produced.
#[derive(Debug, Clone, Default, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
    /// named measurements that are reported but not judged
    pub measurements: BTreeMap<String, f64>,
    #[serde(skip)]
    pub rows: Vec<ReplicaRow>,
    /// extra CSV files: (file name, contents)
    #[serde(skip)]
    pub tables: Vec<(String, String)>,
    #[serde(skip)]
    pub text: Option<String>,
}

impl SuiteReport {
    pub fn new(suite: &str) -> Self {
        Self { suite: suite.to_string(), ..Default::default() }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn measure(&mut self, name: impl Into<String>, value: f64) {
        self.measurements.insert(name.into(), value);
    }

    pub fn rows_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.rows.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(out, "{}", r.csv_line());
        }
        out
    }
}

#[derive(Debug, Serialize)]
pub struct Summary<'a> {
    pub config: &'a ExperimentConfig,
    pub report: &'a SuiteReport,
    pub verdict: &'static str,
}

fn write_file(path: PathBuf, contents: &str) -> Result<PathBuf, CliError> {
    std::fs::write(&path, contents).map_err(|source| CliError::Io { path: path.clone(), source })?;
    Ok(path)
}

/// Writes `<suite>_summary.json`, `<suite>_replicas.csv` when there are
/// replica rows, the extra tables, and `<suite>.txt` for text output.
pub fn write_outputs(dir: &Path, config: &ExperimentConfig, report: &SuiteReport) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.to_path_buf(), source })?;
    let stem = report.suite.replace('-', "_");
    let mut written = Vec::new();
    let summary = Summary { config, report, verdict: if report.passed() { "pass" } else { "fail" } };
    let json = serde_json::to_string_pretty(&summary)? + "\n";
    written.push(write_file(dir.join(format!("{stem}_summary.json")), &json)?);
    if !report.rows.is_empty() {
        written.push(write_file(dir.join(format!("{stem}_replicas.csv")), &report.rows_csv())?);
    }
    for (name, contents) in &report.tables {
        written.push(write_file(dir.join(name), contents)?);
    }
    if let Some(text) = &report.text {
        written.push(write_file(dir.join(format!("{stem}.txt")), text)?);
    }
    Ok(written)
}
