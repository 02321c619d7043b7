use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::check_sample;
use crate::error::{Error, Result};

/// Largest sample size for which the Spearman p-value is computed by full permutation.
pub const EXACT_PERMUTATION_MAX_N: usize = 9;

/// Predictions aligned with ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedSample {
    predictions: Vec<f64>,
    truths: Vec<f64>,
}

impl PairedSample {
    pub fn new(predictions: Vec<f64>, truths: Vec<f64>) -> Result<Self> {
        if predictions.len() != truths.len() {
            return Err(Error::invalid(format!(
                "paired sample lengths differ: {} predictions, {} truths",
                predictions.len(),
                truths.len()
            )));
        }
        check_sample("predictions", &predictions, 1)?;
        check_sample("truths", &truths, 1)?;
        Ok(Self {
            predictions,
            truths,
        })
    }

    pub fn len(&self) -> usize {
        self.predictions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.predictions.is_empty()
    }

    pub fn predictions(&self) -> &[f64] {
        &self.predictions
    }

    pub fn truths(&self) -> &[f64] {
        &self.truths
    }
}

/// 1-based ranks; tied values share the average of their positions.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && values[order[j]] == values[order[i]] {
            j += 1;
        }
        // positions i..j (0-based) share rank mean(i+1 ..= j)
        let rank = (i + j + 1) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = rank;
        }
        i = j;
    }
    ranks
}

fn centered(values: &[f64]) -> Vec<f64> {
    let m = values.iter().sum::<f64>() / values.len() as f64;
    values.iter().map(|v| v - m).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpearmanResult {
    pub r_s: f64,
    pub p_value: f64,
    pub n: usize,
}

/// Spearman rank correlation with a two-sided p-value.
///
/// For `n <= 9` the p-value is exact: the share of all `n!` orderings of the
/// second rank vector whose |r| reaches the observed |r|. Larger samples use
/// the t approximation with `n - 2` degrees of freedom.
pub fn spearman(sample: &PairedSample) -> Result<SpearmanResult> {
    let n = sample.len();
    if n < 3 {
        return Err(Error::invalid(format!(
            "spearman needs at least 3 pairs, got {n}"
        )));
    }
    let cx = centered(&average_ranks(sample.predictions()));
    let cy = centered(&average_ranks(sample.truths()));
    let sxx = dot(&cx, &cx);
    let syy = dot(&cy, &cy);
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Undefined(
            "spearman correlation with constant ranks".into(),
        ));
    }
    let norm = (sxx * syy).sqrt();
    let sxy = dot(&cx, &cy);
    let r_s = (sxy / norm).clamp(-1.0, 1.0);

    let p_value = if n <= EXACT_PERMUTATION_MAX_N {
        exact_permutation_p(&cx, &cy, sxy)
    } else {
        t_approximation_p(r_s, n)
    };
    Ok(SpearmanResult { r_s, p_value, n })
}

fn exact_permutation_p(cx: &[f64], cy: &[f64], observed: f64) -> f64 {
    let n = cy.len();
    let threshold = observed.abs() * (1.0 - 1e-12) - 1e-12;
    let mut perm = cy.to_vec();
    let mut hits: u64 = 0;
    let mut total: u64 = 0;
    let mut count = |p: &[f64]| {
        total += 1;
        if dot(cx, p).abs() >= threshold {
            hits += 1;
        }
    };
    // Heap's algorithm, iterative form.
    let mut c = vec![0usize; n];
    count(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            count(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    hits as f64 / total as f64
}

fn t_approximation_p(r: f64, n: usize) -> f64 {
    let df = (n - 2) as f64;
    let denom = 1.0 - r * r;
    if denom <= 0.0 {
        return 0.0;
    }
    let t = r * (df / denom).sqrt();
    let dist = StudentsT::new(0.0, 1.0, df).expect("df > 0");
    (2.0 * dist.sf(t.abs())).min(1.0)
}

/// Mean absolute error.
pub fn mae(sample: &PairedSample) -> f64 {
    sample
        .predictions()
        .iter()
        .zip(sample.truths())
        .map(|(p, t)| (p - t).abs())
        .sum::<f64>()
        / sample.len() as f64
}

/// `"**"` below 0.01, `"*"` below 0.05, otherwise empty.
pub fn significance_stars(p_value: f64) -> &'static str {
    if p_value < 0.01 {
        "**"
    } else if p_value < 0.05 {
        "*"
    } else {
        ""
    }
}
