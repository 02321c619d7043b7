use serde::{Deserialize, Serialize};

use super::{check_sample, sorted};
use crate::error::{Error, Result};

/// Number of evaluation points on a KDE curve.
pub const KDE_GRID_POINTS: usize = 256;

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Linear-interpolation quantile (Hyndman-Fan type 7) of sorted data.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * q.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn median(values: &[f64]) -> f64 {
    quantile_sorted(&sorted(values), 0.5)
}

/// Median and interquartile range of one group.
pub fn summarize(values: &[f64]) -> Result<super::GroupSummary> {
    check_sample("group", values, 1)?;
    let s = sorted(values);
    Ok(super::GroupSummary {
        median: quantile_sorted(&s, 0.5),
        iqr_lo: quantile_sorted(&s, 0.25),
        iqr_hi: quantile_sorted(&s, 0.75),
        n: s.len(),
    })
}

/// Right-continuous empirical CDF, stored as its jump points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ecdf {
    /// Distinct sample values in increasing order.
    pub x: Vec<f64>,
    /// `F(x[i])`, the share of the sample at or below `x[i]`. The last entry is exactly 1.
    pub y: Vec<f64>,
    sample: Vec<f64>,
}

impl Ecdf {
    pub fn eval(&self, x: f64) -> f64 {
        let below = self.sample.partition_point(|&v| v <= x);
        below as f64 / self.sample.len() as f64
    }
}

pub fn ecdf(values: &[f64]) -> Result<Ecdf> {
    check_sample("ecdf", values, 1)?;
    let sample = sorted(values);
    let n = sample.len();
    let mut x = Vec::new();
    let mut y = Vec::new();
    for (i, &v) in sample.iter().enumerate() {
        if i + 1 < n && sample[i + 1] == v {
            continue;
        }
        x.push(v);
        y.push(if i + 1 == n {
            1.0
        } else {
            (i + 1) as f64 / n as f64
        });
    }
    Ok(Ecdf { x, y, sample })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KdeCurve {
    pub grid: Vec<f64>,
    pub density: Vec<f64>,
    pub bandwidth: f64,
    /// True when the sample had zero spread and a unit bandwidth was used instead.
    pub fallback: bool,
}

/// Gaussian KDE on a 256-point grid spanning `[min - 3h, max + 3h]`.
///
/// The default bandwidth is Scott's rule, `n^(-1/5)` times the sample
/// standard deviation. Zero-spread samples fall back to `h = 1`.
pub fn kde(values: &[f64], bandwidth: Option<f64>) -> Result<KdeCurve> {
    check_sample("kde", values, 1)?;
    let mut fallback = false;
    let h = match bandwidth {
        Some(h) if h > 0.0 && h.is_finite() => h,
        Some(h) => {
            return Err(Error::invalid(format!(
                "kde bandwidth {h} must be positive"
            )))
        }
        None => {
            let n = values.len() as f64;
            let sd = if values.len() > 1 {
                let m = mean(values);
                (values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
            } else {
                0.0
            };
            if sd > 0.0 {
                n.powf(-0.2) * sd
            } else {
                log::warn!("kde sample has zero spread; using bandwidth 1.0");
                fallback = true;
                1.0
            }
        }
    };
    let (min, max) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let lo = min - 3.0 * h;
    let step = (max + 3.0 * h - lo) / (KDE_GRID_POINTS - 1) as f64;
    let norm = 1.0 / (values.len() as f64 * h * (2.0 * std::f64::consts::PI).sqrt());
    let grid: Vec<f64> = (0..KDE_GRID_POINTS).map(|i| lo + step * i as f64).collect();
    let density = grid
        .iter()
        .map(|&x| {
            norm * values
                .iter()
                .map(|&v| {
                    let z = (x - v) / h;
                    (-0.5 * z * z).exp()
                })
                .sum::<f64>()
        })
        .collect();
    Ok(KdeCurve {
        grid,
        density,
        bandwidth: h,
        fallback,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    /// `bins + 1` increasing edges.
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
    /// Counts normalized so the histogram integrates to 1.
    pub density: Vec<f64>,
}

/// Density-normalized histogram.
///
/// Without an explicit bin count the width is the smaller of the Sturges and
/// Freedman-Diaconis widths (Sturges alone when the IQR is zero).
pub fn histogram(values: &[f64], bins: Option<usize>) -> Result<Histogram> {
    check_sample("histogram", values, 1)?;
    let s = sorted(values);
    let n = s.len();
    let (mut first, mut last) = (s[0], s[n - 1]);
    if first == last {
        first -= 0.5;
        last += 0.5;
    }
    let range = last - first;
    let bins = match bins {
        Some(0) => return Err(Error::invalid("histogram needs at least one bin")),
        Some(b) => b,
        None => {
            let sturges = (s[n - 1] - s[0]) / ((n as f64).log2() + 1.0);
            let iqr = quantile_sorted(&s, 0.75) - quantile_sorted(&s, 0.25);
            let fd = 2.0 * iqr * (n as f64).powf(-1.0 / 3.0);
            let width = if fd > 0.0 { fd.min(sturges) } else { sturges };
            if width > 0.0 {
                ((range / width).ceil() as usize).max(1)
            } else {
                1
            }
        }
    };
    let width = range / bins as f64;
    let edges: Vec<f64> = (0..=bins)
        .map(|i| {
            if i == bins {
                last
            } else {
                first + width * i as f64
            }
        })
        .collect();
    let mut counts = vec![0usize; bins];
    for &v in &s {
        let k = (((v - first) / width).floor() as usize).min(bins - 1);
        counts[k] += 1;
    }
    let density = counts
        .iter()
        .enumerate()
        .map(|(k, &c)| c as f64 / (n as f64 * (edges[k + 1] - edges[k])))
        .collect();
    Ok(Histogram {
        edges,
        counts,
        density,
    })
}

/// First Wasserstein distance between two empirical distributions:
/// the area between their ECDFs. Sample sizes may differ.
pub fn wasserstein1d(a: &[f64], b: &[f64]) -> Result<f64> {
    check_sample("wasserstein group a", a, 1)?;
    check_sample("wasserstein group b", b, 1)?;
    let sa = sorted(a);
    let sb = sorted(b);
    let mut all: Vec<f64> = sa.iter().chain(&sb).copied().collect();
    all.sort_by(f64::total_cmp);
    let (na, nb) = (sa.len() as f64, sb.len() as f64);
    let (mut ia, mut ib) = (0usize, 0usize);
    let mut total = 0.0;
    for w in all.windows(2) {
        let x = w[0];
        while ia < sa.len() && sa[ia] <= x {
            ia += 1;
        }
        while ib < sb.len() && sb[ib] <= x {
            ib += 1;
        }
        total += (ia as f64 / na - ib as f64 / nb).abs() * (w[1] - w[0]);
    }
    Ok(total)
}
