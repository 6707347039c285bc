//! The law D(c) of the critical fireproof fraction, its rescaled version
//! μ_x, and the Gaussian-square laws Z² and Z⁻².

use rand::Rng;
use rand_distr::StandardNormal;

use super::quadrature::integrate;
use super::special::normal_cdf;
use crate::error::{invalid, Result};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

fn check_c(c: f64) -> Result<()> {
    if c > 0.0 && c.is_finite() {
        Ok(())
    } else {
        invalid(format!("c must be positive and finite, got {c}"))
    }
}

/// Density of D(c) at `x ∈ (0, 1)`:
/// `c / √(2π x (1-x)³) · exp(-c² x / (2(1-x)))`.
pub fn d_density(c: f64, x: f64) -> Result<f64> {
    check_c(c)?;
    if !(x > 0.0 && x < 1.0) {
        return invalid(format!("D(c) density is defined on (0, 1), got x={x}"));
    }
    let w = 1.0 - x;
    Ok(c / (TWO_PI * x * w * w * w).sqrt() * (-c * c * x / (2.0 * w)).exp())
}

/// Closed-form CDF of D(c): `P(Z²/(c²+Z²) <= x) = 2Φ(c √(x/(1-x))) - 1`.
pub fn d_cdf(c: f64, x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        2.0 * normal_cdf(c * (x / (1.0 - x)).sqrt()) - 1.0
    }
}

/// Integrand of the D(c) density after substituting `x = t²`, which removes
/// the `x^{-1/2}` singularity at the origin.
fn d_integrand_sqrt(c: f64, t: f64) -> f64 {
    let w = 1.0 - t * t;
    if w <= 0.0 {
        return 0.0;
    }
    2.0 * c / TWO_PI.sqrt() * w.powf(-1.5) * (-c * c * t * t / (2.0 * w)).exp()
}

/// CDF of D(c) by adaptive quadrature of the density, independent of the
/// Gaussian representation.
pub fn d_cdf_quadrature(c: f64, x: f64) -> Result<f64> {
    check_c(c)?;
    if x <= 0.0 {
        return Ok(0.0);
    }
    let x = x.min(1.0);
    Ok(integrate(|t| d_integrand_sqrt(c, t), 0.0, x.sqrt(), 1e-13))
}

/// Quadrature CDF on a non-decreasing grid, accumulated interval by interval.
pub fn d_cdf_quadrature_grid(c: f64, grid: &[f64]) -> Result<Vec<f64>> {
    check_c(c)?;
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return invalid("quadrature grid must be non-decreasing");
    }
    let mut out = Vec::with_capacity(grid.len());
    let mut acc = 0.0;
    let mut t_prev = 0.0;
    for &x in grid {
        let t = x.clamp(0.0, 1.0).sqrt();
        acc += integrate(|s| d_integrand_sqrt(c, s), t_prev, t, 1e-15);
        t_prev = t;
        out.push(acc);
    }
    Ok(out)
}

/// Draws from D(c) as `Z² / (c² + Z²)`.
pub fn sample_d<R: Rng + ?Sized>(c: f64, rng: &mut R) -> f64 {
    let z2 = sample_chi2_1(rng);
    z2 / (c * c + z2)
}

/// Density of μ_x at `y ∈ (0, x)`:
/// `(x³ / (2π y (x-y)³))^{1/2} · exp(-x y / (2(x-y)))`.
pub fn mu_x_density(x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return invalid(format!("μ_x needs x > 0, got {x}"));
    }
    if !(y > 0.0 && y < x) {
        return invalid(format!("μ_x density is defined on (0, {x}), got y={y}"));
    }
    let w = x - y;
    Ok((x * x * x / (TWO_PI * y * w * w * w)).sqrt() * (-x * y / (2.0 * w)).exp())
}

/// Draws from μ_x as `x · D(√x)`.
pub fn mu_x_sample<R: Rng + ?Sized>(x: f64, rng: &mut R) -> f64 {
    x * sample_d(x.sqrt(), rng)
}

pub fn sample_chi2_1<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    z * z
}

pub fn sample_inv_chi2_1<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 / sample_chi2_1(rng)
}
