//! Normal tail functions and the closed-form CDFs built from them.

use statrs::function::erf::{erf, erfc};

const SQRT_PI: f64 = 1.772_453_850_905_516;

pub use statrs::function::gamma::ln_gamma;

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Scaled complementary error function `exp(y²) erfc(y)` for `y >= 0`.
pub fn erfcx(y: f64) -> f64 {
    debug_assert!(y >= 0.0);
    if y < 5.0 {
        return (y * y).exp() * erfc(y);
    }
    // continued fraction erfc(y) = exp(-y²)/√π · 1/(y + (1/2)/(y + 1/(y + (3/2)/(y + ...))))
    let mut k = y;
    for j in (1..=60).rev() {
        k = y + 0.5 * j as f64 / k;
    }
    1.0 / (SQRT_PI * k)
}

/// `P(Z² <= x) = 2Φ(√x) - 1`.
pub fn chi2_1_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        erf((x / 2.0).sqrt())
    }
}

/// `P(Z⁻² <= x) = 2Φ(-x^{-1/2})`.
pub fn inv_chi2_1_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        erfc((0.5 / x).sqrt())
    }
}

/// CDF of `e⁻² Z²` with `e` a unit exponential independent of `Z`:
/// `P(|Z| <= e√x) = E[exp(-|Z|/√x)] = erfcx(1/√(2x))`.
pub fn scaled_chi2_exp_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        erfcx((0.5 / x).sqrt())
    }
}
