use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{invalid, Error, Result};

/// Smallest expected count allowed in a pooled cell.
pub const MIN_EXPECTED: f64 = 5.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareReport {
    pub statistic: f64,
    pub dof: usize,
    /// chi-square upper tail of the statistic
    pub p_value: f64,
    pub cells: usize,
    pub total: u64,
}

impl ChiSquareReport {
    pub fn passes(&self, significance: f64) -> bool {
        self.p_value >= significance
    }
}

/// Pearson test of `observed` against `probabilities` (same cell order).
/// Cells are pooled smallest-first until each pooled cell expects at least
/// [`MIN_EXPECTED`]. Any count in a zero-probability cell gives an infinite
/// statistic.
pub fn chi_square_test(observed: &[u64], probabilities: &[f64]) -> Result<ChiSquareReport> {
    if observed.len() != probabilities.len() {
        return invalid("observed and expected cell counts differ in length");
    }
    if probabilities.iter().any(|&p| p.is_nan() || p < 0.0) {
        return invalid("cell probabilities must be nonnegative");
    }
    let mass: f64 = probabilities.iter().sum();
    if (mass - 1.0).abs() > 1e-6 {
        return invalid(format!("cell probabilities sum to {mass}, not 1"));
    }
    let total: u64 = observed.iter().sum();
    if total == 0 {
        return invalid("no observations");
    }
    let nf = total as f64;
    if observed.iter().zip(probabilities).any(|(&o, &p)| p == 0.0 && o > 0) {
        return Ok(ChiSquareReport { statistic: f64::INFINITY, dof: 0, p_value: 0.0, cells: 0, total });
    }

    let mut order: Vec<usize> = (0..observed.len()).filter(|&i| probabilities[i] > 0.0).collect();
    order.sort_by(|&a, &b| probabilities[a].total_cmp(&probabilities[b]).then(a.cmp(&b)));
    let mut pooled: Vec<(f64, f64)> = Vec::new();
    let (mut e, mut o) = (0.0, 0.0);
    for i in order {
        e += probabilities[i] * nf;
        o += observed[i] as f64;
        if e >= MIN_EXPECTED {
            pooled.push((o, e));
            e = 0.0;
            o = 0.0;
        }
    }
    if e > 0.0 || o > 0.0 {
        match pooled.last_mut() {
            Some(last) => {
                last.0 += o;
                last.1 += e;
            }
            None => pooled.push((o, e)),
        }
    }
    if pooled.len() < 2 {
        return Err(Error::Degenerate(format!(
            "only {} cell(s) after pooling to expected >= {MIN_EXPECTED}",
            pooled.len()
        )));
    }
    let statistic: f64 = pooled.iter().map(|&(o, e)| (o - e) * (o - e) / e).sum();
    let dof = pooled.len() - 1;
    let p_value = ChiSquared::new(dof as f64).map(|d| d.sf(statistic)).unwrap_or(0.0);
    Ok(ChiSquareReport { statistic, dof, p_value, cells: pooled.len(), total })
}

/// Keyed version: outcomes seen but absent from `law` count as zero-probability cells.
pub fn chi_square_keyed<K: Ord + Clone>(counts: &BTreeMap<K, u64>, law: &BTreeMap<K, f64>) -> Result<ChiSquareReport> {
    let mut observed = Vec::with_capacity(law.len());
    let mut probabilities = Vec::with_capacity(law.len());
    for (k, &p) in law {
        observed.push(counts.get(k).copied().unwrap_or(0));
        probabilities.push(p);
    }
    for (k, &c) in counts {
        if !law.contains_key(k) {
            observed.push(c);
            probabilities.push(0.0);
        }
    }
    chi_square_test(&observed, &probabilities)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limitlaws::{borel_pmf, sample_borel};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn proportional_counts_give_zero() {
        let r = chi_square_test(&[25, 25, 25, 25], &[0.25; 4]).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.dof, 3);
        assert!((r.p_value - 1.0).abs() < 1e-12);
        let r = chi_square_test(&[10, 30, 60], &[0.1, 0.3, 0.6]).unwrap();
        assert_eq!(r.statistic, 0.0);
    }

    #[test]
    fn pooling_and_degenerate_cases() {
        // the two small cells merge into one of expected 10
        let r = chi_square_test(&[3, 3, 94], &[0.03, 0.03, 0.94]).unwrap();
        assert_eq!(r.cells, 2);
        assert!(chi_square_test(&[100], &[1.0]).is_err());
        assert!(chi_square_test(&[1, 2], &[0.5, 0.4]).is_err());
        let r = chi_square_test(&[50, 49, 1], &[0.5, 0.5, 0.0]).unwrap();
        assert!(r.statistic.is_infinite() && !r.passes(1e-3));
    }

    #[test]
    fn keyed_counts() {
        let law = BTreeMap::from([("a", 0.5), ("b", 0.5)]);
        let counts = BTreeMap::from([("a", 40u64), ("b", 60)]);
        let r = chi_square_keyed(&counts, &law).unwrap();
        assert!((r.statistic - 4.0).abs() < 1e-12);
        let stray = BTreeMap::from([("a", 40u64), ("c", 1)]);
        assert!(chi_square_keyed(&stray, &law).unwrap().statistic.is_infinite());
    }

    #[test]
    fn borel_sampler_against_pmf() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let draws = 1_000_000;
        let mut counts = vec![0u64; 51];
        for _ in 0..draws {
            let m = sample_borel(1.0, &mut rng).unwrap() as usize;
            counts[m.min(51) - 1] += 1;
        }
        let mut probs: Vec<f64> = (1..=50).map(|m| borel_pmf(1.0, m).unwrap()).collect();
        probs.push(1.0 - probs.iter().sum::<f64>());
        let r = chi_square_test(&counts, &probs).unwrap();
        assert!(r.passes(1e-3), "{r:?}");
    }
}
