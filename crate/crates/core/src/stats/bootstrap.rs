use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::distribution::{mean, median, quantile_sorted};
use super::{check_sample, sorted};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BootstrapStatistic {
    MeanDiff,
    MedianDiff,
}

impl BootstrapStatistic {
    fn location(self, values: &[f64]) -> f64 {
        match self {
            BootstrapStatistic::MeanDiff => mean(values),
            BootstrapStatistic::MedianDiff => median(values),
        }
    }

    /// `location(a) - location(b)`.
    pub fn evaluate(self, a: &[f64], b: &[f64]) -> f64 {
        self.location(a) - self.location(b)
    }
}

/// Resampling settings.
///
/// Randomness comes from a ChaCha8 stream seeded with `seed`. Resample `r`
/// draws `len(a)` indices into `a` and then `len(b)` indices into `b`, each
/// with `gen_range(0..len)`; resamples are drawn in order `0..resamples`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapConfig {
    pub resamples: usize,
    pub level: f64,
    pub seed: u64,
}

impl BootstrapConfig {
    pub const DEFAULT_RESAMPLES: usize = 5_000;
    pub const DEFAULT_LEVEL: f64 = 0.95;
    pub const MIN_RESAMPLES: usize = 100;

    pub fn new(seed: u64) -> Self {
        Self {
            resamples: Self::DEFAULT_RESAMPLES,
            level: Self::DEFAULT_LEVEL,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.resamples < Self::MIN_RESAMPLES {
            return Err(Error::Config(format!(
                "bootstrap needs at least {} resamples, got {}",
                Self::MIN_RESAMPLES,
                self.resamples
            )));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::Config(format!(
                "confidence level {} outside (0, 1)",
                self.level
            )));
        }
        Ok(())
    }
}

/// Point estimate with percentile interval.
///
/// For differences of resampled statistics the interval need not contain
/// the point estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceInterval {
    pub point: f64,
    pub lo: f64,
    pub hi: f64,
}

/// Percentile bootstrap interval for `stat(a) - stat(b)`, resampling each group independently.
pub fn bootstrap_ci(
    a: &[f64],
    b: &[f64],
    statistic: BootstrapStatistic,
    config: &BootstrapConfig,
) -> Result<ConfidenceInterval> {
    config.validate()?;
    check_sample("bootstrap group a", a, 1)?;
    check_sample("bootstrap group b", b, 1)?;

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut ra = vec![0.0; a.len()];
    let mut rb = vec![0.0; b.len()];
    let mut stats = Vec::with_capacity(config.resamples);
    for _ in 0..config.resamples {
        for slot in ra.iter_mut() {
            *slot = a[rng.gen_range(0..a.len())];
        }
        for slot in rb.iter_mut() {
            *slot = b[rng.gen_range(0..b.len())];
        }
        stats.push(statistic.evaluate(&ra, &rb));
    }
    let stats = sorted(&stats);
    let tail = (1.0 - config.level) / 2.0;
    Ok(ConfidenceInterval {
        point: statistic.evaluate(a, b),
        lo: quantile_sorted(&stats, tail),
        hi: quantile_sorted(&stats, 1.0 - tail),
    })
}
