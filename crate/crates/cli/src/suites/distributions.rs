//! Self-checks of the limit laws, and the joint law of the root component
//! size and mark count on a rooted tree.

use std::collections::BTreeMap;

use cayley_fires::limitlaws::{
    borel_pmf, borel_tanner_pmf, d_cdf, d_cdf_quadrature_grid, rooted_conditional_mark_pmf, rooted_joint_pmf,
    rooted_mark_outcome, sample_borel, sample_chi2_1, sample_d, sample_inv_chi2_1, subcritical_limit_sample,
};
use cayley_fires::replicas::map_replicas;
use cayley_fires::stats::{chi_square_keyed, chi_square_test, ks_distance, SIGNIFICANCE};
use cayley_fires::stream::{stream, StreamTag};

use super::RunContext;
use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::report::{Check, SuiteReport};

#[derive(Debug, Clone, PartialEq)]
pub struct DistributionParams {
    pub d_c_values: Vec<f64>,
    pub d_grid_points: usize,
    pub laplace_samples: u64,
    pub laplace_q: Vec<f64>,
    pub subcritical_samples: u64,
    pub subcritical_truncation: usize,
    pub subcritical_ks_max: f64,
    pub borel_draws: u64,
    pub rooted_n: usize,
    pub rooted_p: f64,
    pub rooted_replicas: u64,
    pub rooted_condition_x: usize,
}

impl Default for DistributionParams {
    fn default() -> Self {
        Self {
            d_c_values: vec![0.1, 1.0, 10.0],
            d_grid_points: 1000,
            laplace_samples: 1_000_000,
            laplace_q: vec![0.5, 1.5],
            subcritical_samples: 10_000,
            subcritical_truncation: 1000,
            subcritical_ks_max: 0.03,
            borel_draws: 1_000_000,
            rooted_n: 30,
            rooted_p: 0.2,
            rooted_replicas: 1_000_000,
            rooted_condition_x: 5,
        }
    }
}

impl DistributionParams {
    pub fn from_config(cfg: &ExperimentConfig) -> Result<Self, CliError> {
        let mut params = Self::default();
        if let Some(r) = cfg.replicas {
            params.laplace_samples = r;
            params.borel_draws = r;
            params.rooted_replicas = r;
        }
        Ok(params)
    }
}

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (m, (var / n).sqrt())
}

fn draws<T: Send>(ctx: &RunContext, key: u64, count: u64, f: impl Fn(&mut cayley_fires::stream::Stream) -> T + Sync + Send) -> Vec<T> {
    map_replicas(count, ctx.threads, |r| f(&mut stream(ctx.seed, key, r, StreamTag::LIMIT)))
}

pub fn run(params: &DistributionParams, ctx: &RunContext) -> Result<SuiteReport, CliError> {
    let mut report = SuiteReport::new("distributions");

    // representation of D(c) against quadrature of its density
    let grid: Vec<f64> = (1..=params.d_grid_points).map(|i| i as f64 / (params.d_grid_points + 1) as f64).collect();
    for &c in &params.d_c_values {
        let q = d_cdf_quadrature_grid(c, &grid)?;
        let gap = grid.iter().zip(&q).map(|(&x, &v)| (d_cdf(c, x) - v).abs()).fold(0.0, f64::max);
        report.checks.push(Check::at_most(format!("c={c} D(c) CDF vs quadrature"), gap, 1e-6));
    }
    let ds = draws(ctx, 1, 100_000, |rng| sample_d(1.0, rng));
    report.measure("c=1 KS(sample_d, D(1))", ks_distance(&ds, |x| d_cdf(1.0, x))?);

    // Laplace transforms of Z² and Z⁻²
    let z2 = draws(ctx, 2, params.laplace_samples, sample_chi2_1);
    let zm2 = draws(ctx, 3, params.laplace_samples, sample_inv_chi2_1);
    for &q in &params.laplace_q {
        for (name, xs, target) in [
            ("Z^2", &z2, (2.0 * q + 1.0).powf(-0.5)),
            ("Z^-2", &zm2, (-(2.0 * q).sqrt()).exp()),
        ] {
            let values: Vec<f64> = xs.iter().map(|x| (-q * x).exp()).collect();
            let (m, se) = mean_and_se(&values);
            report.checks.push(
                Check::at_most(format!("q={q} Laplace transform of {name} (standard errors)"), (m - target).abs() / se, 3.0)
                    .with_note(format!("mean {m:.6}, target {target:.6}")),
            );
        }
    }

    // Σ X_k(e) = Z²
    let sub = draws(ctx, 4, params.subcritical_samples, |rng| {
        subcritical_limit_sample(params.subcritical_truncation, rng).map(|s| s.value)
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let ks = ks_distance(&sub, cayley_fires::limitlaws::chi2_1_cdf)?;
    report.checks.push(Check::below("subcritical limit sample vs Z^2 KS", ks, params.subcritical_ks_max));

    // Borel-Tanner as a convolution of Borel(1)
    let b1: Vec<f64> = (0..=40u64).map(|m| if m == 0 { 0.0 } else { borel_pmf(1.0, m).unwrap() }).collect();
    let mut conv = b1.clone();
    let mut gap: f64 = 0.0;
    for k in 1..=4u64 {
        for m in 0..=40u64 {
            gap = gap.max((borel_tanner_pmf(k, m)? - conv[m as usize]).abs());
        }
        let mut next = vec![0.0; 41];
        for (i, &x) in conv.iter().enumerate() {
            for (j, &y) in b1.iter().enumerate().take(41 - i) {
                next[i + j] += x * y;
            }
        }
        conv = next;
    }
    report.checks.push(Check::at_most("Borel-Tanner convolution identity", gap, 1e-12));

    // Borel(1) sampler against its pmf
    let borel = draws(ctx, 5, params.borel_draws, |rng| sample_borel(1.0, rng))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let mut counts = vec![0u64; 51];
    for m in borel {
        counts[(m.min(51) - 1) as usize] += 1;
    }
    let mut probs: Vec<f64> = (1..=50u64).map(|m| borel_pmf(1.0, m)).collect::<Result<_, _>>()?;
    probs.push(1.0 - probs.iter().sum::<f64>());
    let chi = chi_square_test(&counts, &probs)?;
    report.checks.push(Check::at_least("Borel(1) sampler chi-square p-value", chi.p_value, SIGNIFICANCE));

    rooted_checks(params, ctx, &mut report)?;
    Ok(report)
}

fn rooted_checks(params: &DistributionParams, ctx: &RunContext, report: &mut SuiteReport) -> Result<(), CliError> {
    let (n, p) = (params.rooted_n, params.rooted_p);
    let outcomes = map_replicas(params.rooted_replicas, ctx.threads, |r| {
        let mut rng = stream(ctx.seed, n as u64, r, StreamTag::ROOTED_MARKS);
        rooted_mark_outcome(n, p, &mut rng).map(|o| (o.c0, o.m))
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;

    let mut joint_counts: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for &cell in &outcomes {
        *joint_counts.entry(cell).or_default() += 1;
    }
    let mut law = BTreeMap::new();
    for x in 1..=n {
        for y in 0..=n - x {
            let prob = rooted_joint_pmf(n, p, x, y)?;
            if prob > 0.0 {
                law.insert((x, y), prob);
            }
        }
    }
    let joint = chi_square_keyed(&joint_counts, &law)?;
    report.checks.push(
        Check::at_least(format!("n={n} p={p} joint law of (C0, M) chi-square p-value"), joint.p_value, SIGNIFICANCE)
            .with_note(format!("{} pooled cells", joint.cells)),
    );

    let x = params.rooted_condition_x;
    let mut cond_counts: BTreeMap<usize, u64> = BTreeMap::new();
    for &(c0, m) in &outcomes {
        if c0 == x {
            *cond_counts.entry(m).or_default() += 1;
        }
    }
    let mut cond_law = BTreeMap::new();
    for y in 1..=n - x {
        cond_law.insert(y, rooted_conditional_mark_pmf(n, p, x, y)?);
    }
    let cond = chi_square_keyed(&cond_counts, &cond_law)?;
    report.measure(format!("n={n} replicas with C0={x}"), cond.total as f64);
    report.checks.push(Check::at_least(
        format!("n={n} p={p} M-1 given C0={x} binomial chi-square p-value"),
        cond.p_value,
        SIGNIFICANCE,
    ));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_run() {
        let params = DistributionParams {
            d_c_values: vec![1.0],
            d_grid_points: 50,
            laplace_samples: 20_000,
            subcritical_samples: 2000,
            subcritical_ks_max: 0.05,
            borel_draws: 20_000,
            rooted_replicas: 50_000,
            ..Default::default()
        };
        let r = run(&params, &RunContext::new(4)).unwrap();
        assert!(r.passed(), "{:#?}", r.checks);
    }
}
