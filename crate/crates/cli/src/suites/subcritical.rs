//! Subcritical regime `n^{-1/2} << p_n`: `p_n² I_n` against Z² and the size
//! of the largest fireproof component.

use cayley_fires::limitlaws::chi2_1_cdf;
use cayley_fires::stats::ks_distance;

use super::{dynamics_replicas, n_values_or, push_rows, strictly_decreasing, RunContext};
use crate::config::{Classification, ExperimentConfig, RegimeSpec};
use crate::error::{usage, CliError};
use crate::report::{Check, SuiteReport};

#[derive(Debug, Clone, PartialEq)]
pub struct SubcriticalParams {
    pub regime: RegimeSpec,
    pub n_values: Vec<usize>,
    pub replicas: u64,
    pub ks_max: f64,
    /// replicas of the largest `n` used for the giant-component window
    pub giant_replicas: u64,
    pub epsilon: f64,
    pub giant_fraction_min: f64,
}

impl Default for SubcriticalParams {
    fn default() -> Self {
        Self {
            regime: RegimeSpec::power(1.0, 0.25).expect("valid regime"),
            n_values: vec![10_000, 1_000_000],
            replicas: 1000,
            ks_max: 0.06,
            giant_replicas: 500,
            epsilon: 0.5,
            giant_fraction_min: 0.95,
        }
    }
}

impl SubcriticalParams {
    pub fn from_config(cfg: &ExperimentConfig) -> Result<Self, CliError> {
        let d = Self::default();
        let regime = cfg.regime.resolve(d.regime)?;
        if regime.classification != Classification::Subcritical {
            return usage("the subcritical suite needs alpha < 1/2 or a fixed p > 0");
        }
        let replicas = cfg.replicas.unwrap_or(d.replicas);
        Ok(Self {
            regime,
            n_values: n_values_or(cfg, d.n_values.clone()),
            replicas,
            giant_replicas: d.giant_replicas.min(replicas),
            ..d
        })
    }
}

pub fn run(params: &SubcriticalParams, ctx: &RunContext) -> Result<SuiteReport, CliError> {
    let mut report = SuiteReport::new("subcritical");
    let mut ks_values = Vec::new();
    let mut giant = (0u64, 0u64);
    for &n in &params.n_values {
        let p = params.regime.p_n(n);
        let reps = dynamics_replicas(ctx, n, p, params.replicas)?;
        let scaled: Vec<f64> = reps.iter().map(|r| p * p * r.outcome.fireproof as f64).collect();
        let ks = ks_distance(&scaled, chi2_1_cdf)?;
        report.measure(format!("n={n} KS(p^2 I, Z^2)"), ks);
        ks_values.push(ks);

        let (lo, hi) = ((n as f64).powf(-params.epsilon) / (p * p), params.epsilon / (p * p));
        let considered = params.giant_replicas.min(params.replicas) as usize;
        let inside = reps[..considered]
            .iter()
            .filter(|r| {
                let g = r.outcome.largest_fireproof_component() as f64;
                g > lo && g < hi
            })
            .count();
        let above = reps[..considered].iter().filter(|r| r.outcome.largest_fireproof_component() as f64 >= hi).count();
        report.measure(format!("n={n} largest fireproof component in window"), inside as f64 / considered as f64);
        report.measure(format!("n={n} largest fireproof component above window"), above as f64 / considered as f64);
        report.measure(format!("n={n} window low"), lo);
        report.measure(format!("n={n} window high"), hi);
        giant = (inside as u64, considered as u64);
        push_rows(&mut report, n, p, &reps);
    }
    let largest = *params.n_values.last().expect("nonempty n list");
    if params.n_values.len() > 1 {
        report.checks.push(Check::holds("KS(p^2 I) strictly decreasing in n", strictly_decreasing(&ks_values)));
    }
    report.checks.push(Check::below(format!("n={largest} KS(p^2 I, Z^2)"), *ks_values.last().unwrap(), params.ks_max));
    report.checks.push(
        Check::at_least(
            format!("n={largest} fraction with largest fireproof component in window"),
            giant.0 as f64 / giant.1 as f64,
            params.giant_fraction_min,
        )
        .with_note(format!("window (n^-eps p^-2, eps p^-2), eps = {}, {} replicas", params.epsilon, giant.1)),
    );
    Ok(report)
}
