use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::bootstrap::{bootstrap_ci, BootstrapConfig, BootstrapStatistic, ConfidenceInterval};
use super::check_sample;
use super::distribution::{summarize, wasserstein1d};
use super::effect::{cliffs_delta, cohens_d};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub median: f64,
    pub iqr_lo: f64,
    pub iqr_hi: f64,
    pub n: usize,
}

/// Two-group comparison. Every difference is first group minus second group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupComparison {
    pub delta_mean: ConfidenceInterval,
    pub delta_median: ConfidenceInterval,
    /// `None` when both groups have zero spread.
    pub cohens_d: Option<f64>,
    pub cliffs_delta: f64,
    pub wasserstein: f64,
    pub groups: BTreeMap<String, GroupSummary>,
}

pub fn compare_groups(
    (name_a, a): (&str, &[f64]),
    (name_b, b): (&str, &[f64]),
    config: &BootstrapConfig,
) -> Result<GroupComparison> {
    if name_a == name_b {
        return Err(Error::invalid(format!("both groups are named {name_a:?}")));
    }
    check_sample(name_a, a, 2)?;
    check_sample(name_b, b, 2)?;
    let mut groups = BTreeMap::new();
    groups.insert(name_a.to_string(), summarize(a)?);
    groups.insert(name_b.to_string(), summarize(b)?);
    Ok(GroupComparison {
        delta_mean: bootstrap_ci(a, b, BootstrapStatistic::MeanDiff, config)?,
        delta_median: bootstrap_ci(a, b, BootstrapStatistic::MedianDiff, config)?,
        cohens_d: match cohens_d(a, b) {
            Ok(d) => Some(d),
            Err(Error::Undefined(_)) => None,
            Err(e) => return Err(e),
        },
        cliffs_delta: cliffs_delta(a, b)?,
        wasserstein: wasserstein1d(a, b)?,
        groups,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_groups() {
        let a = [0.1, 0.5, 0.2, 0.9, 0.4];
        let c = compare_groups(("x", &a), ("y", &a), &BootstrapConfig::new(3)).unwrap();
        assert_eq!(c.delta_mean.point, 0.0);
        assert_eq!(c.delta_median.point, 0.0);
        assert_eq!(c.cohens_d, Some(0.0));
        assert_eq!(c.cliffs_delta, 0.0);
        assert_eq!(c.wasserstein, 0.0);
        assert_eq!(c.groups["x"], c.groups["y"]);
        assert_eq!(c.groups["x"].median, 0.4);
    }

    #[test]
    fn report_field_names() {
        let c = compare_groups(
            ("victim", &[1.0, 2.0, 3.0]),
            ("ideologue", &[0.0, 1.0]),
            &BootstrapConfig::new(3),
        )
        .unwrap();
        let v = serde_json::to_value(&c).unwrap();
        for key in [
            "delta_mean",
            "delta_median",
            "cohens_d",
            "cliffs_delta",
            "wasserstein",
            "groups",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
        for key in ["point", "lo", "hi"] {
            assert!(v["delta_mean"].get(key).is_some());
        }
        for key in ["median", "iqr_lo", "iqr_hi", "n"] {
            assert!(v["groups"]["victim"].get(key).is_some());
        }
    }

    #[test]
    fn constant_groups_have_no_cohens_d() {
        let c = compare_groups(
            ("x", &[1.0, 1.0]),
            ("y", &[1.0, 1.0, 1.0]),
            &BootstrapConfig::new(3),
        )
        .unwrap();
        assert_eq!(c.cohens_d, None);
        assert_eq!(c.delta_median.point, 0.0);
        assert_eq!(
            serde_json::to_value(&c).unwrap()["cohens_d"],
            serde_json::Value::Null
        );
    }

    #[test]
    fn rejects_tiny_or_same_named_groups() {
        let cfg = BootstrapConfig::new(0);
        assert!(compare_groups(("a", &[1.0]), ("b", &[1.0, 2.0]), &cfg).is_err());
        assert!(compare_groups(("a", &[1.0, 3.0]), ("a", &[1.0, 2.0]), &cfg).is_err());
    }
}
