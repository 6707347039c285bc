use crate::error::{invalid, Result};

fn sorted(samples: &[f64]) -> Result<Vec<f64>> {
    if samples.is_empty() {
        return invalid("KS distance needs at least one sample");
    }
    if samples.iter().any(|x| x.is_nan()) {
        return invalid("samples contain NaN");
    }
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// `sup_x |F_n(x) - F(x)|`, checking both sides of every jump of `F_n`.
pub fn ks_distance(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    let xs = sorted(samples)?;
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    Ok(d)
}

/// KS distance from samples already sorted ascending and the reference CDF
/// evaluated at each of them, for CDFs that are expensive to call.
pub fn ks_distance_tabulated(sorted_samples: &[f64], cdf_values: &[f64]) -> Result<f64> {
    if sorted_samples.is_empty() || sorted_samples.len() != cdf_values.len() {
        return invalid("need one CDF value per sample and at least one sample");
    }
    if sorted_samples.windows(2).any(|w| w[0].partial_cmp(&w[1]).is_none_or(|o| o.is_gt())) {
        return invalid("samples must be sorted ascending");
    }
    let n = sorted_samples.len() as f64;
    Ok(cdf_values
        .iter()
        .enumerate()
        .map(|(i, &f)| (f - i as f64 / n).max((i + 1) as f64 / n - f))
        .fold(0.0, f64::max))
}

/// Two-sample distance `sup_x |F_a(x) - F_b(x)|`; ties are stepped over together.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    let (xa, xb) = (sorted(a)?, sorted(b)?);
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < xa.len() && j < xb.len() {
        let x = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] <= x {
            i += 1;
        }
        while j < xb.len() && xb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// Asymptotic Kolmogorov tail `P(√n D > λ) ≈ 2 Σ (-1)^{k-1} exp(-2k²λ²)`.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let s: f64 = (1..=100)
        .map(|k| {
            let k = k as f64;
            let sign = if k as i64 % 2 == 1 { 1.0 } else { -1.0 };
            sign * (-2.0 * k * k * lambda * lambda).exp()
        })
        .sum();
    (2.0 * s).clamp(0.0, 1.0)
}
