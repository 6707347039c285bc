//! Verification suites. Each has a parameter struct whose defaults are the
//! desk-scale acceptance settings, and a `run` function producing a report.

use std::time::Instant;

use cayley_fires::dynamics::{run_dynamics, DynamicsOutcome};
use cayley_fires::replicas::map_replicas;
use cayley_fires::stream::{stream, StreamTag};
use cayley_fires::treegen::sample_uniform_tree;

use crate::config::{ExperimentConfig, Suite};
use crate::error::CliError;
use crate::report::{ReplicaRow, SuiteReport};

pub mod coupling;
pub mod critical;
pub mod demo;
pub mod distributions;
pub mod oracle;
pub mod subcritical;
pub mod supercritical;

/// What every suite needs besides its own parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunContext {
    pub seed: u64,
    pub threads: Option<usize>,
    pub record_timing: bool,
}

impl RunContext {
    pub fn new(seed: u64) -> Self {
        Self { seed, threads: None, record_timing: false }
    }

    pub fn from_config(cfg: &ExperimentConfig) -> Self {
        Self { seed: cfg.seed, threads: cfg.threads, record_timing: cfg.record_timing }
    }
}

pub fn run_suite(cfg: &ExperimentConfig) -> Result<SuiteReport, CliError> {
    let ctx = RunContext::from_config(cfg);
    match cfg.suite {
        Suite::Oracle => oracle::run(&oracle::OracleParams::from_config(cfg)?, &ctx),
        Suite::Coupling => coupling::run(&coupling::CouplingParams::from_config(cfg)?, &ctx),
        Suite::Critical => critical::run(&critical::CriticalParams::from_config(cfg)?, &ctx),
        Suite::Subcritical => subcritical::run(&subcritical::SubcriticalParams::from_config(cfg)?, &ctx),
        Suite::Supercritical => supercritical::run(&supercritical::SupercriticalParams::from_config(cfg)?, &ctx),
        Suite::Distributions => distributions::run(&distributions::DistributionParams::from_config(cfg)?, &ctx),
        Suite::CuttreeDemo => demo::run(),
    }
}

/// Outcome of one replica of the dynamics and its wall-clock cost.
pub struct Replica {
    pub outcome: DynamicsOutcome,
    pub runtime_ns: u64,
}

/// Replicas `0..count` of the dynamics on a fresh uniform tree of size `n`.
pub fn dynamics_replicas(ctx: &RunContext, n: usize, p: f64, count: u64) -> Result<Vec<Replica>, CliError> {
    let results = map_replicas(count, ctx.threads, |r| {
        let start = Instant::now();
        let mut rng = stream(ctx.seed, n as u64, r, StreamTag::DYNAMICS);
        let tree = sample_uniform_tree(n, &mut rng)?;
        let outcome = run_dynamics(&tree, p, &mut rng)?;
        let runtime_ns = if ctx.record_timing { start.elapsed().as_nanos() as u64 } else { 0 };
        Ok::<_, cayley_fires::Error>(Replica { outcome, runtime_ns })
    });
    results.into_iter().map(|r| r.map_err(CliError::from)).collect()
}

pub fn push_rows(report: &mut SuiteReport, n: usize, p: f64, replicas: &[Replica]) {
    report
        .rows
        .extend(replicas.iter().enumerate().map(|(r, rep)| ReplicaRow::new(n, p, r as u64, &rep.outcome, rep.runtime_ns)));
}

/// `true` when each value is strictly below the one before.
pub fn strictly_decreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] < w[0])
}

fn n_values_or(cfg: &ExperimentConfig, default: Vec<usize>) -> Vec<usize> {
    cfg.n_values.clone().unwrap_or(default)
}
