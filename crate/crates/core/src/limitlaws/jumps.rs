//! Jump sequences of the stable-1/2 subordinator: the unconditioned Poisson
//! atoms and the ranked jumps on [0, 1] given σ(1) = z.

use rand::Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use super::borel::conditioned_borel_vector;
use crate::error::{invalid, Error, Result};

/// Smallest discretisation accepted by [`conditioned_jumps`].
pub const MIN_DISCRETIZATION: u64 = 10_000;
pub const DEFAULT_DISCRETIZATION: u64 = 1_000_000;

/// Finite non-increasing prefix of a jump sequence together with a bound on
/// the expected ℓ¹ mass left out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpSequence {
    pub values: Vec<f64>,
    pub tail_mass_bound: f64,
    pub total_hint: Option<f64>,
}

impl JumpSequence {
    pub fn new(values: Vec<f64>, tail_mass_bound: f64, total_hint: Option<f64>) -> Result<Self> {
        let seq = JumpSequence { values, tail_mass_bound, total_hint };
        seq.validate()?;
        Ok(seq)
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
            return invalid("jump values must be positive and finite");
        }
        if self.values.windows(2).any(|w| w[1] > w[0]) {
            return invalid("jump values must be non-increasing");
        }
        if self.tail_mass_bound.is_nan() || self.tail_mass_bound < 0.0 {
            return invalid("tail mass bound must be nonnegative");
        }
        if let Some(t) = self.total_hint {
            if self.sum() > t * (1.0 + 1e-9) + 1e-12 {
                return invalid(format!("jumps sum to {} above the total {t}", self.sum()));
            }
        }
        Ok(())
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// `i`-th largest jump, zero beyond the stored prefix.
    pub fn get(&self, i: usize) -> f64 {
        self.values.get(i).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// One atom `γ⁻² Z²` of the stable-1/2 jump measure, with its arrival `γ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpAtom {
    pub gamma: f64,
    pub atom: f64,
}

/// Expected mass of `Σ_{i>J} γ_i⁻² Z_i²`, which is `Σ_{i>J} 1/((i-1)(i-2)) = 1/(J-1)`.
pub fn stable_tail_bound(count: usize) -> f64 {
    if count < 2 {
        f64::INFINITY
    } else {
        1.0 / (count as f64 - 1.0)
    }
}

/// First `count` atoms in appearance order. The atoms of a Poisson measure
/// with intensity `(2π x³)^{-1/2} dx` are `γ_i⁻² Z_i²` with `γ_i` the arrival
/// times of a unit Poisson process.
pub fn stable_jump_atoms<R: Rng + ?Sized>(count: usize, rng: &mut R) -> Result<Vec<JumpAtom>> {
    if count == 0 {
        return invalid("need at least one atom");
    }
    let mut gamma = 0.0;
    Ok((0..count)
        .map(|_| {
            let e: f64 = rng.sample(Exp1);
            gamma += e;
            let z: f64 = rng.sample(StandardNormal);
            JumpAtom { gamma, atom: z * z / (gamma * gamma) }
        })
        .collect())
}

/// Sorted non-increasing copy of a sequence of increments.
pub fn ranked_jumps(values: &[f64]) -> Result<Vec<f64>> {
    if values.iter().any(|&v| v.is_nan() || v < 0.0) {
        return invalid("increments must be nonnegative");
    }
    let mut out = values.to_vec();
    out.sort_by(|a, b| b.total_cmp(a));
    Ok(out)
}

/// Bridge sizes `(k, a, scale)` for the Borel approximation of σ on [0, 1]
/// given σ(1) = z. The walk with `k` Borel(1) steps, rescaled by `k²`, is σ on
/// [0, 1]; for `z <= 1` the values `k = ⌊√N⌋, a = ⌊zN⌋` are used directly.
/// For larger `z` the conditioned sum is `z k²`, so `k` shrinks to keep the
/// work near `N`.
pub fn bridge_parameters(z: f64, discretization: u64) -> Result<(u64, u64, f64)> {
    if !(z > 0.0 && z.is_finite()) {
        return invalid(format!("conditioned total must be positive and finite, got {z}"));
    }
    if discretization < MIN_DISCRETIZATION {
        return Err(Error::OutOfRange {
            what: "discretization",
            value: discretization.to_string(),
            range: format!(">= {MIN_DISCRETIZATION}"),
        });
    }
    let nf = discretization as f64;
    let (mut k, a, scale) = if z <= 1.0 {
        ((nf.sqrt().floor()) as u64, (z * nf).floor() as u64, nf)
    } else {
        let k = ((nf / z).sqrt().floor() as u64).max(1);
        let kf = k as f64;
        (k, (z * kf * kf).floor() as u64, kf * kf)
    };
    if a == 0 {
        return Err(Error::Degenerate(format!(
            "total z={z} is below one discretisation unit 1/{discretization}"
        )));
    }
    k = k.min(a);
    Ok((k, a, scale))
}

/// Approximate ranked jumps of σ on [0, 1] conditioned on σ(1) = z, from an
/// exact Borel bridge of [`bridge_parameters`] size.
pub fn conditioned_jumps<R: Rng + ?Sized>(z: f64, discretization: u64, rng: &mut R) -> Result<JumpSequence> {
    let (k, a, scale) = bridge_parameters(z, discretization)?;
    if k == 1 {
        return Ok(JumpSequence { values: vec![z], tail_mass_bound: 0.0, total_hint: Some(z) });
    }
    let mut betas = conditioned_borel_vector(k, a, rng)?;
    betas.sort_unstable_by(|x, y| y.cmp(x));
    let values = betas.into_iter().map(|b| b as f64 / scale).collect();
    Ok(JumpSequence { values, tail_mass_bound: 0.0, total_hint: Some(z) })
}
