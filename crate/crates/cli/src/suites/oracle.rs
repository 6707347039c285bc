//! Exact small-n laws against the simulated dynamics.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use cayley_fires::dynamics::run_dynamics;
use cayley_fires::replicas::map_replicas;
use cayley_fires::stats::{chi_square_keyed, oracle_table, OutcomeKey, ORACLE_MAX_N, SIGNIFICANCE};
use cayley_fires::stream::{stream, StreamTag};
use cayley_fires::treegen::sample_uniform_tree;

use super::{n_values_or, RunContext};
use crate::config::{ExperimentConfig, RegimeForm};
use crate::error::{usage, CliError};
use crate::report::{Check, SuiteReport};

#[derive(Debug, Clone, PartialEq)]
pub struct OracleParams {
    pub n_values: Vec<usize>,
    pub p_values: Vec<f64>,
    pub replicas: u64,
}

impl Default for OracleParams {
    fn default() -> Self {
        Self { n_values: (2..=ORACLE_MAX_N).collect(), p_values: vec![0.1, 0.3, 0.7], replicas: 1_000_000 }
    }
}

impl OracleParams {
    pub fn from_config(cfg: &ExperimentConfig) -> Result<Self, CliError> {
        let mut params = Self { n_values: n_values_or(cfg, Self::default().n_values), ..Self::default() };
        if let Some(r) = cfg.replicas {
            params.replicas = r;
        }
        if !cfg.regime.is_empty() {
            match cfg.regime.resolve(crate::config::RegimeSpec::explicit(0.3)?)?.form {
                RegimeForm::Explicit { p } => params.p_values = vec![p],
                RegimeForm::Power { .. } => return usage("the oracle suite takes --p, not --c/--alpha"),
            }
        }
        if let Some(&n) = params.n_values.iter().find(|&&n| n > ORACLE_MAX_N) {
            return usage(format!("the exact oracle covers n <= {ORACLE_MAX_N}, got {n}"));
        }
        Ok(params)
    }
}

/// `p` as a fraction with a power-of-ten denominator when it is one exactly.
fn decimal_fraction(p: f64) -> Option<(u64, u64)> {
    let mut den = 1u64;
    for _ in 0..=6 {
        let num = (p * den as f64).round();
        if (num / den as f64 - p).abs() < 1e-15 * p.max(1.0) {
            return Some((num as u64, den));
        }
        den *= 10;
    }
    None
}

const CHUNK: u64 = 1 << 16;

pub fn run(params: &OracleParams, ctx: &RunContext) -> Result<SuiteReport, CliError> {
    let mut report = SuiteReport::new("oracle");
    let mut cells = String::from("n,p,outcome,observed,expected\n");
    for &n in &params.n_values {
        let table = oracle_table(n, ctx.threads)?;
        for &p in &params.p_values {
            let float_law = table.law(p)?.as_map();
            let (law, exactness) = match decimal_fraction(p).filter(|_| n <= 5) {
                Some((num, den)) => {
                    let exact = table.rational_law(num, den)?;
                    let law: BTreeMap<OutcomeKey, f64> =
                        exact.into_iter().map(|(k, (a, b))| (k, a as f64 / b as f64)).collect();
                    let gap = law.iter().map(|(k, v)| (v - float_law.get(k).copied().unwrap_or(0.0)).abs()).fold(0.0, f64::max);
                    report.measure(format!("n={n} p={p} rational_vs_float_max_gap"), gap);
                    (law, "exact rational")
                }
                None => (float_law, "compensated floats"),
            };
            let mass: f64 = law.values().sum();
            report.checks.push(Check::at_most(format!("n={n} p={p} law normalisation"), (mass - 1.0).abs(), 1e-12));

            let mut counts: BTreeMap<OutcomeKey, u64> = BTreeMap::new();
            let mut start = 0;
            while start < params.replicas {
                let len = CHUNK.min(params.replicas - start);
                let keys = map_replicas(len, ctx.threads, |i| {
                    let mut rng = stream(ctx.seed, n as u64, start + i, StreamTag::DYNAMICS);
                    let tree = sample_uniform_tree(n, &mut rng)?;
                    run_dynamics(&tree, p, &mut rng).map(|o| OutcomeKey::from(&o))
                });
                for k in keys {
                    *counts.entry(k?).or_default() += 1;
                }
                start += len;
            }
            let chi = chi_square_keyed(&counts, &law)?;
            report.checks.push(
                Check::at_least(format!("n={n} p={p} chi-square p-value"), chi.p_value, SIGNIFICANCE).with_note(format!(
                    "statistic {:.3} on {} dof, expectations from {exactness}",
                    chi.statistic, chi.dof
                )),
            );
            for (k, &prob) in &law {
                let _ = writeln!(
                    cells,
                    "{n},{p},\"{k}\",{},{}",
                    counts.get(k).copied().unwrap_or(0),
                    prob * params.replicas as f64
                );
            }
        }
    }
    report.tables.push(("oracle_cells.csv".into(), cells));
    Ok(report)
}
