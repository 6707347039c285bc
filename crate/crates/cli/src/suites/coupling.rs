//! Forward simulation against the cut-tree pipeline, field for field.

use rand::Rng;

use cayley_fires::cuttree::simulate;
use cayley_fires::dynamics::{run_forward, CoinVector, EdgeOrder};
use cayley_fires::replicas::map_replicas;
use cayley_fires::stream::{stream, StreamTag};
use cayley_fires::treegen::{enumerate_trees, sample_uniform_tree, LabeledTree};

use super::{n_values_or, RunContext};
use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::report::{Check, SuiteReport};

#[derive(Debug, Clone, PartialEq)]
pub struct CouplingParams {
    /// every tree, order and coin vector up to this size
    pub exhaustive_max_n: usize,
    pub random_n_values: Vec<usize>,
    pub random_triples: u64,
}

impl Default for CouplingParams {
    fn default() -> Self {
        Self { exhaustive_max_n: 6, random_n_values: vec![50, 200], random_triples: 10_000 }
    }
}

impl CouplingParams {
    pub fn from_config(cfg: &ExperimentConfig) -> Result<Self, CliError> {
        let d = Self::default();
        Ok(Self {
            random_n_values: n_values_or(cfg, d.random_n_values.clone()),
            random_triples: cfg.replicas.unwrap_or(d.random_triples),
            ..d
        })
    }
}

fn mismatches_on_tree(tree: &LabeledTree) -> (u64, u64) {
    let edges = tree.n() - 1;
    let (mut checked, mut bad) = (0, 0);
    for order in EdgeOrder::all(edges) {
        for mask in 0u32..(1 << edges) {
            let coins = CoinVector::from_bits((0..edges).map(|i| mask >> i & 1 == 1).collect());
            checked += 1;
            if run_forward(tree, &order, &coins).ok() != simulate(tree, &order, &coins).ok() {
                bad += 1;
            }
        }
    }
    (checked, bad)
}

pub fn run(params: &CouplingParams, ctx: &RunContext) -> Result<SuiteReport, CliError> {
    let mut report = SuiteReport::new("coupling");
    for n in 2..=params.exhaustive_max_n.min(cayley_fires::stats::ORACLE_MAX_N) {
        let trees: Vec<LabeledTree> = enumerate_trees(n)?.collect();
        let parts = map_replicas(trees.len() as u64, ctx.threads, |i| mismatches_on_tree(&trees[i as usize]));
        let (checked, bad) = parts.iter().fold((0, 0), |acc, x| (acc.0 + x.0, acc.1 + x.1));
        report.measure(format!("n={n} exhaustive triples"), checked as f64);
        report.checks.push(Check::at_most(format!("n={n} exhaustive mismatches"), bad as f64, 0.0));
    }
    for &n in &params.random_n_values {
        let bad: u64 = map_replicas(params.random_triples, ctx.threads, |r| {
            let mut rng = stream(ctx.seed, n as u64, r, StreamTag::COUPLING);
            let tree = sample_uniform_tree(n, &mut rng).expect("n >= 2");
            let order = EdgeOrder::random(n - 1, &mut rng);
            let p: f64 = rng.random();
            let coins = CoinVector::random(n - 1, p, &mut rng);
            u64::from(run_forward(&tree, &order, &coins).ok() != simulate(&tree, &order, &coins).ok())
        })
        .into_iter()
        .sum();
        report.checks.push(Check::at_most(format!("n={n} random mismatches"), bad as f64, 0.0).with_note(format!(
            "{} random (tree, order, coins) triples, p uniform on (0,1) per triple",
            params.random_triples
        )));
    }
    Ok(report)
}
