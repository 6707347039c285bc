//! Exact law of (I, ranked burnt sizes) for small `n` by exhaustive
//! enumeration of trees, edge orders and coin vectors.
//!
//! The enumeration records, for every outcome, how many (tree, order, coins)
//! triples with `j` ignitable coins produce it. The law at `p` is then the
//! polynomial `Σ_j count_j p^j (1-p)^{n-1-j}` divided by `n^{n-2} (n-1)!`,
//! which can be evaluated exactly at rational `p` or in compensated floats.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dynamics::{run_forward, CoinVector, DynamicsOutcome, EdgeOrder};
use crate::error::{invalid, Error, Result};
use crate::replicas::map_replicas;
use crate::treegen::{enumerate_trees, LabeledTree};

pub const ORACLE_MAX_N: usize = 6;

/// The part of an outcome the oracle tracks.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct OutcomeKey {
    pub fireproof: usize,
    pub burnt_ranked: Vec<usize>,
}

impl From<&DynamicsOutcome> for OutcomeKey {
    fn from(o: &DynamicsOutcome) -> Self {
        OutcomeKey { fireproof: o.fireproof, burnt_ranked: o.burnt_ranked.clone() }
    }
}

impl std::fmt::Display for OutcomeKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "I={} burnt={:?}", self.fireproof, self.burnt_ranked)
    }
}

/// A finite law over outcomes with positive probabilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactLaw {
    pub support: Vec<OutcomeKey>,
    pub probabilities: Vec<f64>,
}

impl ExactLaw {
    pub fn total(&self) -> f64 {
        neumaier_sum(self.probabilities.iter().copied())
    }

    pub fn probability(&self, key: &OutcomeKey) -> f64 {
        self.support.binary_search(key).map(|i| self.probabilities[i]).unwrap_or(0.0)
    }

    pub fn as_map(&self) -> BTreeMap<OutcomeKey, f64> {
        self.support.iter().cloned().zip(self.probabilities.iter().copied()).collect()
    }

    /// Marginal law of the fireproof count, indexed `0..=n`.
    pub fn fireproof_marginal(&self, n: usize) -> Vec<f64> {
        let mut out = vec![0.0; n + 1];
        for (k, &p) in self.support.iter().zip(&self.probabilities) {
            out[k.fireproof] += p;
        }
        out
    }
}

/// Integer counts per outcome and per number of ignitable coins.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleTable {
    pub n: usize,
    pub counts: BTreeMap<OutcomeKey, Vec<u64>>,
}

fn check_n(n: usize) -> Result<()> {
    if (2..=ORACLE_MAX_N).contains(&n) {
        Ok(())
    } else {
        Err(Error::OutOfRange { what: "n", value: n.to_string(), range: format!("2..={ORACLE_MAX_N}") })
    }
}

fn tree_counts(tree: &LabeledTree) -> BTreeMap<OutcomeKey, Vec<u64>> {
    let edges = tree.n() - 1;
    let mut counts: BTreeMap<OutcomeKey, Vec<u64>> = BTreeMap::new();
    for order in EdgeOrder::all(edges) {
        for mask in 0u32..(1 << edges) {
            let coins = CoinVector::from_bits((0..edges).map(|i| mask >> i & 1 == 1).collect());
            let outcome = run_forward(tree, &order, &coins).expect("enumerated inputs are valid");
            counts.entry(OutcomeKey::from(&outcome)).or_insert_with(|| vec![0; edges + 1])[mask.count_ones() as usize] += 1;
        }
    }
    counts
}

/// Enumerates every (tree, order, coins) triple, trees spread over `threads` workers.
pub fn oracle_table(n: usize, threads: Option<usize>) -> Result<OracleTable> {
    check_n(n)?;
    let trees: Vec<LabeledTree> = enumerate_trees(n)?.collect();
    let parts = map_replicas(trees.len() as u64, threads, |i| tree_counts(&trees[i as usize]));
    let mut counts: BTreeMap<OutcomeKey, Vec<u64>> = BTreeMap::new();
    for part in parts {
        for (k, v) in part {
            let slot = counts.entry(k).or_insert_with(|| vec![0; n]);
            for (s, c) in slot.iter_mut().zip(v) {
                *s += c;
            }
        }
    }
    Ok(OracleTable { n, counts })
}

fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn neumaier_sum(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

impl OracleTable {
    /// Number of (tree, order, coins) triples, `n^{n-2} (n-1)! 2^{n-1}`.
    pub fn triples(&self) -> u64 {
        self.counts.values().flatten().sum()
    }

    fn weight_denominator(&self) -> u64 {
        (self.n as u64).pow(self.n as u32 - 2) * factorial(self.n - 1)
    }

    /// Law at `p`, each probability summed with compensation.
    pub fn law(&self, p: f64) -> Result<ExactLaw> {
        if !(0.0..=1.0).contains(&p) {
            return invalid(format!("p must lie in [0, 1], got {p}"));
        }
        let e = self.n - 1;
        let denom = self.weight_denominator() as f64;
        let mut law = ExactLaw { support: Vec::new(), probabilities: Vec::new() };
        for (key, poly) in &self.counts {
            let prob = neumaier_sum(
                poly.iter()
                    .enumerate()
                    .filter(|(_, &c)| c > 0)
                    .map(|(j, &c)| c as f64 * p.powi(j as i32) * (1.0 - p).powi((e - j) as i32)),
            ) / denom;
            if prob > 0.0 {
                law.support.push(key.clone());
                law.probabilities.push(prob);
            }
        }
        Ok(law)
    }

    /// Law at the rational `p = num/den` as reduced fractions.
    pub fn rational_law(&self, num: u64, den: u64) -> Result<BTreeMap<OutcomeKey, (u128, u128)>> {
        if den == 0 || num > den {
            return invalid(format!("{num}/{den} is not a probability"));
        }
        let e = self.n as u32 - 1;
        let (a, b) = (num as u128, (den - num) as u128);
        let denom = self.weight_denominator() as u128 * (den as u128).pow(e);
        let mut out = BTreeMap::new();
        for (key, poly) in &self.counts {
            let numerator: u128 =
                poly.iter().enumerate().map(|(j, &c)| c as u128 * a.pow(j as u32) * b.pow(e - j as u32)).sum();
            if numerator > 0 {
                let g = gcd(numerator, denom);
                out.insert(key.clone(), (numerator / g, denom / g));
            }
        }
        Ok(out)
    }
}

/// Exact law of (I, ranked burnt sizes) for `2 <= n <= 6`.
pub fn brute_force_oracle(n: usize, p: f64) -> Result<ExactLaw> {
    oracle_table(n, None)?.law(p)
}
