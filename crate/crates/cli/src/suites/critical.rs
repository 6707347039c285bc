//! Critical regime `p_n ~ c n^{-1/2}`: the fireproof fraction against D(c)
//! and the rescaled burnt sizes against the critical limit sample.

use cayley_fires::limitlaws::{critical_limit_sample, d_cdf, d_cdf_quadrature_grid, JumpSequence};
use cayley_fires::replicas::map_replicas;
use cayley_fires::stats::{ks_distance, ks_distance_tabulated, ranked_l1_compare};
use cayley_fires::stream::{stream, StreamTag};

use super::{dynamics_replicas, n_values_or, push_rows, strictly_decreasing, RunContext};
use crate::config::{Classification, ExperimentConfig, RegimeSpec};
use crate::error::{usage, CliError};
use crate::report::{Check, SuiteReport};

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalParams {
    pub c: f64,
    pub n_values: Vec<usize>,
    pub replicas: u64,
    pub limit_replicas: u64,
    pub depth: usize,
    pub discretization: u64,
    pub ks_max: f64,
    pub ranked_max: f64,
}

impl Default for CriticalParams {
    fn default() -> Self {
        Self {
            c: 1.0,
            n_values: vec![1_000, 10_000, 100_000],
            replicas: 2000,
            limit_replicas: 2000,
            depth: 5,
            discretization: 1_000_000,
            ks_max: 0.05,
            ranked_max: 0.05,
        }
    }
}

impl CriticalParams {
    pub fn from_config(cfg: &ExperimentConfig) -> Result<Self, CliError> {
        let d = Self::default();
        let regime = cfg.regime.resolve(RegimeSpec::power(d.c, 0.5)?)?;
        if regime.classification != Classification::Critical {
            return usage("the critical suite needs alpha = 1/2");
        }
        let replicas = cfg.replicas.unwrap_or(d.replicas);
        Ok(Self {
            c: regime.c().unwrap_or(d.c),
            n_values: n_values_or(cfg, d.n_values.clone()),
            replicas,
            limit_replicas: replicas,
            depth: cfg.depth,
            discretization: cfg.discretization,
            ..d
        })
    }
}

pub fn run(params: &CriticalParams, ctx: &RunContext) -> Result<SuiteReport, CliError> {
    let mut report = SuiteReport::new("critical");
    let regime = RegimeSpec::power(params.c, 0.5)?;
    let mut ks_values = Vec::new();
    let mut last_burnt: Vec<JumpSequence> = Vec::new();
    for &n in &params.n_values {
        let p = regime.p_n(n);
        let reps = dynamics_replicas(ctx, n, p, params.replicas)?;
        let mut fractions: Vec<f64> = reps.iter().map(|r| r.outcome.fireproof as f64 / n as f64).collect();
        fractions.sort_by(f64::total_cmp);
        let quadrature = d_cdf_quadrature_grid(params.c, &fractions)?;
        let ks = ks_distance_tabulated(&fractions, &quadrature)?;
        report.measure(format!("n={n} KS(I/n, D(c) quadrature)"), ks);
        report.measure(format!("n={n} KS(I/n, D(c) closed form)"), ks_distance(&fractions, |x| d_cdf(params.c, x))?);
        ks_values.push(ks);
        last_burnt = reps
            .iter()
            .map(|r| JumpSequence {
                values: r.outcome.burnt_ranked.iter().map(|&b| b as f64 / n as f64).collect(),
                tail_mass_bound: 0.0,
                total_hint: None,
            })
            .collect();
        push_rows(&mut report, n, p, &reps);
    }
    let largest = *params.n_values.last().expect("nonempty n list");
    if params.n_values.len() > 1 {
        report.checks.push(Check::holds("KS(I/n) strictly decreasing in n", strictly_decreasing(&ks_values)));
    }
    report.checks.push(Check::below(format!("n={largest} KS(I/n, D(c))"), *ks_values.last().unwrap(), params.ks_max));

    let limit = map_replicas(params.limit_replicas, ctx.threads, |r| {
        let mut rng = stream(ctx.seed, params.discretization, r, StreamTag::LIMIT);
        critical_limit_sample(params.c, params.discretization, &mut rng).map(|s| s.burnt)
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let cmp = ranked_l1_compare(&last_burnt, &limit, params.depth)?;
    for (i, &d) in cmp.coordinate_ks.iter().enumerate() {
        report.checks.push(Check::below(format!("n={largest} ranked burnt coordinate {} KS", i + 1), d, params.ranked_max));
    }
    report.checks.push(Check::below(format!("n={largest} burnt total KS"), cmp.total_ks, params.ranked_max));
    report.measure("limit tail mass bound", cmp.tail_bound_b);
    Ok(report)
}
