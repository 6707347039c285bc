//! Samplers for the limit laws of the three regimes.

use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use super::continuous::{mu_x_sample, sample_d};
use super::jumps::{conditioned_jumps, stable_jump_atoms, stable_tail_bound, JumpSequence};
use crate::error::{invalid, Result};

/// Critical limit: fireproof fraction `x ~ D(c)` and the ranked burnt
/// fractions, summing to `1 - x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalSample {
    pub x: f64,
    pub burnt: JumpSequence,
}

pub fn critical_limit_sample<R: Rng + ?Sized>(c: f64, discretization: u64, rng: &mut R) -> Result<CriticalSample> {
    if !(c > 0.0 && c.is_finite()) {
        return invalid(format!("c must be positive and finite, got {c}"));
    }
    let x = sample_d(c, rng);
    let mass = 1.0 - x;
    if mass <= 0.0 {
        return Ok(CriticalSample { x, burnt: JumpSequence { values: vec![], tail_mass_bound: 0.0, total_hint: Some(0.0) } });
    }
    let z = mass / (c * c * x * x);
    let values = if z.is_finite() {
        let j = conditioned_jumps(z, discretization, rng)?;
        let scale = mass / j.sum();
        j.values.into_iter().map(|v| v * scale).collect()
    } else {
        vec![mass]
    };
    Ok(CriticalSample { x, burnt: JumpSequence { values, tail_mass_bound: 0.0, total_hint: Some(mass) } })
}

/// One draw of `Σ_k X_k(e)` truncated after `J` atoms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubcriticalSample {
    pub value: f64,
    /// `e²/(J-1)`, the expected mass of the omitted atoms given `e`
    pub tail_mass_bound: f64,
}

/// The pairs `(e² γ_k⁻² Z_k², X_k)` with `X_k ~ μ` of the atom, in appearance order.
pub fn subcritical_limit_terms<R: Rng + ?Sized>(truncation: usize, rng: &mut R) -> Result<(f64, Vec<(f64, f64)>)> {
    if truncation < 2 {
        return invalid("truncation index must be at least 2");
    }
    let e: f64 = rng.sample(Exp1);
    let atoms = stable_jump_atoms(truncation, rng)?;
    let terms = atoms
        .into_iter()
        .map(|a| {
            let x = e * e * a.atom;
            (x, mu_x_sample(x, rng))
        })
        .collect();
    Ok((e, terms))
}

pub fn subcritical_limit_sample<R: Rng + ?Sized>(truncation: usize, rng: &mut R) -> Result<SubcriticalSample> {
    let (e, terms) = subcritical_limit_terms(truncation, rng)?;
    Ok(SubcriticalSample {
        value: terms.iter().map(|t| t.1).sum(),
        tail_mass_bound: e * e * stable_tail_bound(truncation),
    })
}

/// First `J` terms of `(γ_i⁻² Z_i²)` in appearance order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitSequence {
    pub terms: Vec<f64>,
    pub tail_mass_bound: f64,
}

pub fn supercritical_limit_sequence<R: Rng + ?Sized>(truncation: usize, rng: &mut R) -> Result<LimitSequence> {
    if truncation < 2 {
        return invalid("truncation index must be at least 2");
    }
    let terms = stable_jump_atoms(truncation, rng)?.into_iter().map(|a| a.atom).collect();
    Ok(LimitSequence { terms, tail_mass_bound: stable_tail_bound(truncation) })
}
