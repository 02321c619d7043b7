//! Statistics used to evaluate predictions and compare groups.
//!
//! Rank correlation with p-values and MAE for paired predictions; bootstrap
//! percentile intervals, Cohen's d, Cliff's delta, and the 1-D Wasserstein
//! distance for two-group comparisons; ECDF, Gaussian KDE, and histogram
//! data for plotting.

mod bootstrap;
mod compare;
mod distribution;
mod effect;
mod rank;

pub use bootstrap::{bootstrap_ci, BootstrapConfig, BootstrapStatistic, ConfidenceInterval};
pub use compare::{compare_groups, GroupComparison, GroupSummary};
pub use distribution::{
    ecdf, histogram, kde, mean, median, quantile_sorted, summarize, wasserstein1d, Ecdf, Histogram,
    KdeCurve, KDE_GRID_POINTS,
};
pub use effect::{cliffs_delta, cohens_d, mann_whitney_u};
pub use rank::{average_ranks, mae, significance_stars, spearman, PairedSample, SpearmanResult};

use crate::error::{Error, Result};

pub(crate) fn check_sample(name: &str, values: &[f64], min_len: usize) -> Result<()> {
    if values.len() < min_len {
        return Err(Error::invalid(format!(
            "{name} needs at least {min_len} values, got {}",
            values.len()
        )));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::invalid(format!(
            "{name} contains non-finite value {v}"
        )));
    }
    Ok(())
}

pub(crate) fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}
