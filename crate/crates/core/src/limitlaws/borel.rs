//! Borel and Borel–Tanner laws, their samplers, and exact sampling of i.i.d.
//! Borel(1) vectors conditioned on their sum.

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use super::special::ln_gamma;
use crate::error::{invalid, Result};

/// `ln P(Borel(z) = m) = -mz + (m-1) ln(mz) - ln m!`.
pub fn ln_borel_pmf(z: f64, m: u64) -> Result<f64> {
    if !(z > 0.0 && z <= 1.0) {
        return invalid(format!("Borel parameter must lie in (0, 1], got {z}"));
    }
    if m == 0 {
        return invalid("Borel support starts at 1");
    }
    let m = m as f64;
    Ok(-m * z + (m - 1.0) * (m * z).ln() - ln_gamma(m + 1.0))
}

pub fn borel_pmf(z: f64, m: u64) -> Result<f64> {
    ln_borel_pmf(z, m).map(f64::exp)
}

/// `ln P(Borel-Tanner(k) = m) = ln k - ln (m-k)! - m + (m-k-1) ln m`, or
/// `-inf` when `m < k`.
pub fn ln_borel_tanner_pmf(k: u64, m: u64) -> Result<f64> {
    if k == 0 {
        return invalid("Borel-Tanner needs k >= 1");
    }
    if m < k {
        return Ok(f64::NEG_INFINITY);
    }
    let (kf, mf) = (k as f64, m as f64);
    Ok(kf.ln() - ln_gamma(mf - kf + 1.0) - mf + (mf - kf - 1.0) * mf.ln())
}

pub fn borel_tanner_pmf(k: u64, m: u64) -> Result<f64> {
    ln_borel_tanner_pmf(k, m).map(f64::exp)
}

/// Total progeny of a Galton–Watson process with Poisson(z) offspring,
/// simulated one generation at a time (a generation of `g` individuals has
/// Poisson(`g z`) children in total).
pub fn sample_borel<R: Rng + ?Sized>(z: f64, rng: &mut R) -> Result<u64> {
    if !(z > 0.0 && z <= 1.0) {
        return invalid(format!(
            "Borel sampling needs z in (0, 1] (z > 1 may never terminate), got {z}"
        ));
    }
    let mut total: u64 = 1;
    let mut generation: u64 = 1;
    while generation > 0 {
        let lambda = z * generation as f64;
        generation = Poisson::new(lambda).expect("positive finite rate").sample(rng) as u64;
        total += generation;
    }
    Ok(total)
}

/// Exact draw of `(β_1, …, β_k)` i.i.d. Borel(1) conditioned on summing to
/// `a`, by sequential conditionals
/// `P(β_1 = m | Σ = a) = Borel(1)(m) · BT(k-1)(a-m) / BT(k)(a)`
/// each inverted from `m = 1` upwards. Total work is `O(a)`.
pub fn conditioned_borel_vector<R: Rng + ?Sized>(k: u64, a: u64, rng: &mut R) -> Result<Vec<u64>> {
    if k == 0 || a < k {
        return invalid(format!("need 1 <= k <= a, got k={k}, a={a}"));
    }
    let mut out = Vec::with_capacity(k as usize);
    let (mut rest_k, mut rest_a) = (k, a);
    while rest_k > 1 {
        let m = sample_first_coordinate(rest_k, rest_a, rng);
        out.push(m);
        rest_k -= 1;
        rest_a -= m;
    }
    out.push(rest_a);
    Ok(out)
}

fn sample_first_coordinate<R: Rng + ?Sized>(k: u64, a: u64, rng: &mut R) -> u64 {
    debug_assert!(k >= 2 && a >= k);
    let last = a - k + 1;
    if last == 1 {
        return 1;
    }
    let (kf, af) = (k as f64, a as f64);
    let ln_norm = ln_borel_tanner_pmf(k, a).unwrap();
    // ln P(β_1 = m | Σ = a) = (m-1) ln m - ln m! + ln(k-1) - ln Γ(a-m-k+2)
    //                         + (a-m-k) ln(a-m) - a - ln BT(k)(a)
    let constant = (kf - 1.0).ln() - af - ln_norm;
    let u: f64 = rng.random();
    let mut ln_fact_m = 0.0; // ln m!
    let mut ln_gamma_r = ln_gamma(af - kf + 1.0); // ln Γ(a-m-k+2) at m = 1
    let mut cumulative = 0.0;
    for m in 1..last {
        let mf = m as f64;
        let rest = af - mf;
        let ln_p = (mf - 1.0) * mf.ln() - ln_fact_m + constant - ln_gamma_r + (rest - kf) * rest.ln();
        cumulative += ln_p.exp();
        if cumulative >= u {
            return m;
        }
        ln_fact_m += (mf + 1.0).ln();
        // Γ argument a-m-k+2 drops by one
        ln_gamma_r -= (af - mf - kf + 1.0).ln();
    }
    last
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn borel_values() {
        assert_abs_diff_eq!(borel_pmf(1.0, 1).unwrap(), (-1.0f64).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(borel_pmf(1.0, 2).unwrap(), (-2.0f64).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(borel_pmf(0.01, 1).unwrap(), (-0.01f64).exp(), epsilon = 1e-15);
        assert!(borel_pmf(1.5, 1).is_err());
        assert!(borel_pmf(0.0, 1).is_err());
        assert!(borel_pmf(0.5, 0).is_err());
    }

    #[test]
    fn borel_normalisation() {
        let s: f64 = (1..=1_000_000u64).map(|m| borel_pmf(1.0, m).unwrap()).sum();
        // tail ~ sqrt(2/(pi m)) ~ 8e-4 at m = 1e6
        assert!(s < 1.0 && 1.0 - s < 1e-2, "{s}");
        let s: f64 = (1..=2000u64).map(|m| borel_pmf(0.5, m).unwrap()).sum();
        assert_abs_diff_eq!(s, 1.0, epsilon = 1e-12);
        let mean: f64 = (1..=2000u64).map(|m| m as f64 * borel_pmf(0.5, m).unwrap()).sum();
        assert_abs_diff_eq!(mean, 2.0, epsilon = 1e-10);
    }

    #[test]
    fn borel_tanner_values() {
        assert_abs_diff_eq!(borel_tanner_pmf(1, 1).unwrap(), (-1.0f64).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(borel_tanner_pmf(2, 2).unwrap(), (-2.0f64).exp(), epsilon = 1e-15);
        assert_eq!(borel_tanner_pmf(3, 2).unwrap(), 0.0);
        assert!(borel_tanner_pmf(0, 2).is_err());
    }

    /// Direct convolution of Borel(1) pmfs as the oracle.
    #[test]
    fn borel_tanner_is_a_convolution() {
        let b1: Vec<f64> = (0..=40u64)
            .map(|m| if m == 0 { 0.0 } else { borel_pmf(1.0, m).unwrap() })
            .collect();
        let mut conv = b1.clone();
        for k in 1..=4u64 {
            for m in 0..=40u64 {
                let bt = borel_tanner_pmf(k, m).unwrap();
                assert_abs_diff_eq!(bt, conv[m as usize], epsilon = 1e-12);
            }
            let mut next = vec![0.0; 41];
            for (i, &x) in conv.iter().enumerate() {
                for (j, &y) in b1.iter().enumerate() {
                    if i + j <= 40 {
                        next[i + j] += x * y;
                    }
                }
            }
            conv = next;
        }
        // k = 3, m = 7 over compositions of 7 into 3 parts
        let mut direct = 0.0;
        for i in 1..=5u64 {
            for j in 1..=(6 - i) {
                let l = 7 - i - j;
                direct += borel_pmf(1.0, i).unwrap() * borel_pmf(1.0, j).unwrap() * borel_pmf(1.0, l).unwrap();
            }
        }
        assert_abs_diff_eq!(borel_tanner_pmf(3, 7).unwrap(), direct, epsilon = 1e-15);
    }

    #[test]
    fn borel_sampler_small_z_and_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let draws = 100_000;
        let ones = (0..draws).filter(|_| sample_borel(0.01, &mut rng).unwrap() == 1).count();
        let p = (-0.01f64).exp();
        let sd = (p * (1.0 - p) / draws as f64).sqrt();
        assert!((ones as f64 / draws as f64 - p).abs() < 4.0 * sd);

        // mean 1/(1-z) = 2 at z = 1/2; variance z/(1-z)^3 = 4
        let xs: Vec<f64> = (0..draws).map(|_| sample_borel(0.5, &mut rng).unwrap() as f64).collect();
        let mean = xs.iter().sum::<f64>() / draws as f64;
        assert!((mean - 2.0).abs() < 3.0 * (4.0f64 / draws as f64).sqrt(), "{mean}");
        assert!(sample_borel(1.2, &mut rng).is_err());
    }

    #[test]
    fn conditioned_vector_degenerate_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        assert_eq!(conditioned_borel_vector(1, 9, &mut rng).unwrap(), vec![9]);
        assert_eq!(conditioned_borel_vector(4, 4, &mut rng).unwrap(), vec![1, 1, 1, 1]);
        assert!(conditioned_borel_vector(5, 4, &mut rng).is_err());
        assert!(conditioned_borel_vector(0, 4, &mut rng).is_err());
        let mut ones = 0;
        for _ in 0..20_000 {
            let v = conditioned_borel_vector(2, 3, &mut rng).unwrap();
            assert_eq!(v.iter().sum::<u64>(), 3);
            if v[0] == 1 {
                ones += 1;
            }
        }
        // each ordering has probability e^-1 e^-2 / (2 e^-3) = 1/2
        assert!((ones as f64 - 10_000.0).abs() < 4.0 * 70.8, "{ones}");
    }

    #[test]
    fn conditioned_vector_sums_and_exchangeable_means() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (k, a) = (5u64, 60u64);
        let reps = 20_000;
        let mut first = 0.0;
        let mut last = 0.0;
        for _ in 0..reps {
            let v = conditioned_borel_vector(k, a, &mut rng).unwrap();
            assert_eq!(v.len(), k as usize);
            assert_eq!(v.iter().sum::<u64>(), a);
            first += v[0] as f64;
            last += v[4] as f64;
        }
        // both coordinates have mean a/k = 12; sd of each coordinate is below 20
        let tol = 4.0 * 20.0 / (reps as f64).sqrt();
        assert!((first / reps as f64 - 12.0).abs() < tol);
        assert!((last / reps as f64 - 12.0).abs() < tol);
    }
}
