//! Supercritical regime `1/n << p_n << n^{-1/2}`: burnt mass against Z⁻²,
//! burnt sizes in order of appearance against `(γ_i⁻² Z_i²)`, and the tail
//! sum of the marked-subtree process.

use cayley_fires::dynamics::{marked_process_conditional_means, EdgeOrder};
use cayley_fires::limitlaws::{inv_chi2_1_cdf, scaled_chi2_exp_cdf, supercritical_limit_sequence};
use cayley_fires::replicas::map_replicas;
use cayley_fires::stats::{coordinatewise_ks, ks_distance};
use cayley_fires::stream::{stream, StreamTag};
use cayley_fires::treegen::sample_uniform_tree;

use super::{dynamics_replicas, n_values_or, push_rows, RunContext};
use crate::config::{Classification, ExperimentConfig, RegimeSpec};
use crate::error::{usage, CliError};
use crate::report::{Check, SuiteReport};

#[derive(Debug, Clone, PartialEq)]
pub struct SupercriticalParams {
    pub regime: RegimeSpec,
    pub n_values: Vec<usize>,
    pub replicas: u64,
    pub limit_replicas: u64,
    /// truncation of the limit sequence
    pub truncation: usize,
    /// coordinates compared in order of appearance
    pub depth: usize,
    pub ks_max: f64,
    pub tail_n_values: Vec<usize>,
    pub tail_replicas: u64,
    pub tail_a_values: Vec<f64>,
    /// the constant C is this factor times the largest `a S(n, a)` at the smallest `n`
    pub tail_constant_slack: f64,
}

impl Default for SupercriticalParams {
    fn default() -> Self {
        Self {
            regime: RegimeSpec::power(1.0, 0.75).expect("valid regime"),
            n_values: vec![10_000, 1_000_000],
            replicas: 1000,
            limit_replicas: 1000,
            truncation: 1000,
            depth: 3,
            ks_max: 0.06,
            tail_n_values: vec![1_000, 10_000],
            tail_replicas: 1000,
            tail_a_values: vec![1.0, 2.0, 4.0],
            tail_constant_slack: 1.5,
        }
    }
}

impl SupercriticalParams {
    pub fn from_config(cfg: &ExperimentConfig) -> Result<Self, CliError> {
        let d = Self::default();
        let regime = cfg.regime.resolve(d.regime)?;
        if regime.classification != Classification::Supercritical {
            return usage("the supercritical suite needs 1/2 < alpha < 1");
        }
        let replicas = cfg.replicas.unwrap_or(d.replicas);
        Ok(Self {
            regime,
            n_values: n_values_or(cfg, d.n_values.clone()),
            replicas,
            limit_replicas: replicas,
            depth: cfg.depth.min(d.depth),
            ..d
        })
    }
}

/// Tail sums `n^{-2} p^{-1} Σ_{k=⌊a/p⌋}^{⌊n-u_n⌋} E[b'_k]` for each `a`, one
/// value per replica, from the conditional means given tree and order.
fn tail_sums(ctx: &RunContext, n: usize, p: f64, replicas: u64, a_values: &[f64]) -> Result<Vec<Vec<f64>>, CliError> {
    let u_n = n as f64 * (-(n as f64 * p).sqrt()).exp();
    let hi = ((n as f64 - u_n).floor() as usize).min(n - 2);
    let norm = 1.0 / ((n as f64).powi(2) * p);
    let rows = map_replicas(replicas, ctx.threads, |r| {
        let mut rng = stream(ctx.seed, n as u64, r, StreamTag::MARKED_PROCESS);
        let tree = sample_uniform_tree(n, &mut rng)?;
        let order = EdgeOrder::random(n - 1, &mut rng);
        let means = marked_process_conditional_means(&tree, &order)?;
        Ok::<_, cayley_fires::Error>(
            a_values
                .iter()
                .map(|&a| {
                    let lo = ((a / p).floor() as usize).max(1);
                    if lo > hi {
                        0.0
                    } else {
                        norm * means[lo - 1..hi].iter().sum::<f64>()
                    }
                })
                .collect(),
        )
    });
    rows.into_iter().map(|r| r.map_err(CliError::from)).collect()
}

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0).max(1.0);
    (m, (var / n).sqrt())
}

pub fn run(params: &SupercriticalParams, ctx: &RunContext) -> Result<SuiteReport, CliError> {
    let mut report = SuiteReport::new("supercritical");
    let limit: Vec<Vec<f64>> = map_replicas(params.limit_replicas, ctx.threads, |r| {
        let mut rng = stream(ctx.seed, params.truncation as u64, r, StreamTag::LIMIT);
        supercritical_limit_sequence(params.truncation, &mut rng).map(|s| s.terms)
    })
    .into_iter()
    .collect::<Result<_, _>>()?;

    let largest = *params.n_values.last().expect("nonempty n list");
    for &n in &params.n_values {
        let p = params.regime.p_n(n);
        let reps = dynamics_replicas(ctx, n, p, params.replicas)?;
        let scale = 1.0 / (n as f64 * p).powi(2);
        let totals: Vec<f64> = reps.iter().map(|r| scale * r.outcome.burnt as f64).collect();
        let ks_total = ks_distance(&totals, inv_chi2_1_cdf)?;
        let appearance: Vec<Vec<f64>> = reps
            .iter()
            .map(|r| r.outcome.burnt_by_appearance.iter().take(params.depth).map(|&b| scale * b as f64).collect())
            .collect();
        let coords = coordinatewise_ks(&appearance, &limit, params.depth)?;
        let first: Vec<f64> = appearance.iter().map(|v| v.first().copied().unwrap_or(0.0)).collect();
        let ks_first = ks_distance(&first, scaled_chi2_exp_cdf)?;
        report.measure(format!("n={n} KS((np)^-2 B, Z^-2)"), ks_total);
        report.measure(format!("n={n} KS(first burnt, e^-2 Z^2)"), ks_first);
        for (i, &d) in coords.iter().enumerate() {
            report.measure(format!("n={n} appearance coordinate {} KS", i + 1), d);
        }
        if n == largest {
            report.checks.push(Check::below(format!("n={n} KS((np)^-2 B, Z^-2)"), ks_total, params.ks_max));
            for (i, &d) in coords.iter().enumerate() {
                report.checks.push(Check::below(format!("n={n} appearance coordinate {} KS", i + 1), d, params.ks_max));
            }
            report.checks.push(Check::below(format!("n={n} KS(first burnt, e^-2 Z^2)"), ks_first, params.ks_max));
        }
        push_rows(&mut report, n, p, &reps);
    }

    if !params.tail_n_values.is_empty() {
        tail_checks(params, ctx, &mut report)?;
    }
    Ok(report)
}

fn tail_checks(params: &SupercriticalParams, ctx: &RunContext, report: &mut SuiteReport) -> Result<(), CliError> {
    let mut scaled_by_n = Vec::new();
    let mut monotone = true;
    for &n in &params.tail_n_values {
        let p = params.regime.p_n(n);
        let sums = tail_sums(ctx, n, p, params.tail_replicas, &params.tail_a_values)?;
        let mut previous: Option<(f64, Vec<f64>)> = None;
        let mut scaled = Vec::new();
        for (j, &a) in params.tail_a_values.iter().enumerate() {
            let column: Vec<f64> = sums.iter().map(|row| row[j]).collect();
            let (m, se) = mean_and_se(&column);
            report.measure(format!("n={n} a={a} tail sum S"), m);
            report.measure(format!("n={n} a={a} tail sum standard error"), se);
            if let Some((prev_m, prev_col)) = &previous {
                let diffs: Vec<f64> = column.iter().zip(prev_col).map(|(x, y)| x - y).collect();
                let (_, se_diff) = mean_and_se(&diffs);
                monotone &= m <= prev_m + 3.0 * se_diff;
            }
            previous = Some((m, column));
            scaled.push(a * m);
        }
        scaled_by_n.push(scaled);
    }
    report.checks.push(Check::holds("tail sum S(n, a) non-increasing in a", monotone));
    let constant = params.tail_constant_slack * scaled_by_n[0].iter().copied().fold(0.0, f64::max);
    let worst = scaled_by_n.iter().flatten().copied().fold(0.0, f64::max);
    report.measure("tail constant C", constant);
    report.checks.push(
        Check::at_most("a S(n, a) bounded by C across n", worst, constant).with_note(format!(
            "C = {} x max_a a S(n, a) at n = {}",
            params.tail_constant_slack, params.tail_n_values[0]
        )),
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_supercritical_run() {
        let params = SupercriticalParams {
            n_values: vec![2000],
            replicas: 100,
            limit_replicas: 100,
            tail_n_values: vec![300, 1000],
            tail_replicas: 50,
            ..Default::default()
        };
        let r = run(&params, &RunContext::new(2)).unwrap();
        assert_eq!(r.rows.len(), 100);
        assert_eq!(r.checks.len(), 7);
        assert!(r.check("tail sum S(n, a) non-increasing in a").unwrap().passed);
    }
}
