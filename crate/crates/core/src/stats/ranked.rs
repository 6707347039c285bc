use serde::{Deserialize, Serialize};

use super::ks::ks_two_sample;
use crate::error::{invalid, Result};
use crate::limitlaws::JumpSequence;

pub const DEFAULT_DEPTH: usize = 5;

/// Finite-depth stand-in for an ℓ¹ comparison of two laws on ranked sequences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedComparison {
    pub depth: usize,
    /// two-sample KS distance of the `i`-th largest coordinate (zero-padded)
    pub coordinate_ks: Vec<f64>,
    pub total_ks: f64,
    /// mean reported tail-mass bound of each side
    pub tail_bound_a: f64,
    pub tail_bound_b: f64,
}

impl RankedComparison {
    pub fn max_distance(&self) -> f64 {
        self.coordinate_ks.iter().copied().fold(self.total_ks, f64::max)
    }
}

pub fn ranked_l1_compare(a: &[JumpSequence], b: &[JumpSequence], depth: usize) -> Result<RankedComparison> {
    if depth == 0 {
        return invalid("comparison depth must be at least 1");
    }
    if a.is_empty() || b.is_empty() {
        return invalid("both sample sets must be nonempty");
    }
    let coordinate_ks = (0..depth)
        .map(|i| {
            let xa: Vec<f64> = a.iter().map(|s| s.get(i)).collect();
            let xb: Vec<f64> = b.iter().map(|s| s.get(i)).collect();
            ks_two_sample(&xa, &xb)
        })
        .collect::<Result<Vec<_>>>()?;
    let ta: Vec<f64> = a.iter().map(JumpSequence::sum).collect();
    let tb: Vec<f64> = b.iter().map(JumpSequence::sum).collect();
    let mean_tail = |s: &[JumpSequence]| s.iter().map(|j| j.tail_mass_bound).sum::<f64>() / s.len() as f64;
    Ok(RankedComparison {
        depth,
        coordinate_ks,
        total_ks: ks_two_sample(&ta, &tb)?,
        tail_bound_a: mean_tail(a),
        tail_bound_b: mean_tail(b),
    })
}

/// Per-coordinate two-sample KS on sequences in their given order (zero-padded).
pub fn coordinatewise_ks(a: &[Vec<f64>], b: &[Vec<f64>], depth: usize) -> Result<Vec<f64>> {
    if depth == 0 {
        return invalid("comparison depth must be at least 1");
    }
    (0..depth)
        .map(|i| {
            let xa: Vec<f64> = a.iter().map(|s| s.get(i).copied().unwrap_or(0.0)).collect();
            let xb: Vec<f64> = b.iter().map(|s| s.get(i).copied().unwrap_or(0.0)).collect();
            ks_two_sample(&xa, &xb)
        })
        .collect()
}
