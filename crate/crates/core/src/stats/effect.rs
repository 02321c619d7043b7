use super::rank::average_ranks;
use super::{check_sample, distribution::mean};
use crate::error::{Error, Result};

fn sample_variance(values: &[f64]) -> f64 {
    let m = mean(values);
    values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (values.len() - 1) as f64
}

/// Standardized mean difference `(mean_a - mean_b) / pooled_sd` using sample (n - 1) variances.
pub fn cohens_d(a: &[f64], b: &[f64]) -> Result<f64> {
    check_sample("cohens_d group a", a, 2)?;
    check_sample("cohens_d group b", b, 2)?;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let pooled = (((na - 1.0) * sample_variance(a) + (nb - 1.0) * sample_variance(b))
        / (na + nb - 2.0))
        .sqrt();
    if pooled == 0.0 {
        return Err(Error::Undefined(
            "cohen's d with zero pooled standard deviation".into(),
        ));
    }
    Ok((mean(a) - mean(b)) / pooled)
}

/// Mann-Whitney U for `a`: pairs with `a > b` plus half the tied pairs.
pub fn mann_whitney_u(a: &[f64], b: &[f64]) -> Result<f64> {
    check_sample("mann_whitney_u group a", a, 1)?;
    check_sample("mann_whitney_u group b", b, 1)?;
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = average_ranks(&pooled);
    let rank_sum: f64 = ranks[..a.len()].iter().sum();
    let na = a.len() as f64;
    Ok(rank_sum - na * (na + 1.0) / 2.0)
}

/// Cliff's delta `2U / (n_a n_b) - 1`, i.e. `P(a > b) - P(a < b)`.
pub fn cliffs_delta(a: &[f64], b: &[f64]) -> Result<f64> {
    let u = mann_whitney_u(a, b)?;
    let pairs = a.len() as f64 * b.len() as f64;
    Ok((2.0 * u / pairs - 1.0).clamp(-1.0, 1.0))
}
