use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::BufReader;

use fusionlens_core::report::format_float;
use fusionlens_core::stats::{ecdf, histogram, kde};
use fusionlens_core::{
    compare_groups, filter_high_fusion_records, read_records, to_canonical_pretty, BootstrapConfig,
    GroupComparison, PredictionRecord,
};
use serde::Serialize;
use serde_json::Value;

use super::with_path;
use crate::args::{CompareArgs, GlobalArgs};
use crate::error::{CliError, CliResult, Status};
use crate::output::{file_stem_safe, Output};

#[derive(Serialize)]
struct CompareConfig<'a> {
    groups: [&'a str; 2],
    high_fusion_only: bool,
    level: f64,
    resamples: usize,
    seed: u64,
}

#[derive(Serialize)]
struct CompareReport<'a> {
    config: CompareConfig<'a>,
    features: BTreeMap<String, GroupComparison>,
}

pub fn compare(g: &GlobalArgs, a: &CompareArgs) -> CliResult {
    let seed = g
        .seed
        .ok_or_else(|| CliError::usage("compare runs a bootstrap and needs --seed"))?;
    let config = BootstrapConfig {
        resamples: a.resamples,
        level: a.level,
        seed,
    };
    config
        .validate()
        .map_err(|e| CliError::usage(e.to_string()))?;
    if let Some(groups) = &a.groups {
        if groups.len() != 2 || groups[0] == groups[1] {
            return Err(CliError::usage(
                "--groups takes exactly two distinct labels",
            ));
        }
    }

    let path = &a.predictions;
    let file = File::open(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    let mut records: Vec<Value> =
        read_records(BufReader::new(file)).map_err(|e| with_path(path, e))?;
    if a.high_fusion_only {
        let typed = records
            .into_iter()
            .map(serde_json::from_value::<PredictionRecord>)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| {
                CliError::data(format!("--high-fusion-only needs prediction records: {e}"))
            })?;
        records = filter_high_fusion_records(&typed)
            .iter()
            .map(|r| serde_json::to_value(r).expect("record serializes"))
            .collect();
    }

    let mut labels = BTreeSet::new();
    for r in &records {
        let label = r
            .get("group")
            .and_then(Value::as_str)
            .ok_or_else(|| CliError::data(format!("record {} has no group label", record_id(r))))?;
        labels.insert(label.to_string());
    }
    let [name_a, name_b] = match &a.groups {
        Some(gs) => {
            for l in gs {
                if !labels.contains(l) {
                    return Err(CliError::data(format!("group {l:?} has no records")));
                }
            }
            [gs[0].clone(), gs[1].clone()]
        }
        None => {
            if labels.len() != 2 {
                return Err(CliError::data(format!(
                    "expected exactly 2 groups, found {}: {:?}",
                    labels.len(),
                    labels
                )));
            }
            let mut it = labels.into_iter();
            [it.next().unwrap(), it.next().unwrap()]
        }
    };

    let out = Output::new(g.out.as_deref())?;
    let mut features = BTreeMap::new();
    for feature in &a.features {
        let va = column(&records, &name_a, feature)?;
        let vb = column(&records, &name_b, feature)?;
        let cmp = compare_groups((&name_a, &va), (&name_b, &vb), &config)
            .map_err(|e| CliError::data(format!("{feature}: {e}")))?;
        features.insert(feature.clone(), cmp);
        if out.has_dir() {
            for (name, values) in [(&name_a, &va), (&name_b, &vb)] {
                write_plot_data(&out, feature, name, values)?;
            }
        }
    }

    let report = CompareReport {
        config: CompareConfig {
            groups: [&name_a, &name_b],
            high_fusion_only: a.high_fusion_only,
            level: a.level,
            resamples: a.resamples,
            seed,
        },
        features,
    };
    out.primary("comparison.json", &to_canonical_pretty(&report)?)?;
    Ok(Status::Success)
}

fn record_id(r: &Value) -> String {
    r.get("id")
        .and_then(Value::as_str)
        .unwrap_or("<no id>")
        .to_string()
}

fn column(records: &[Value], group: &str, feature: &str) -> CliResult<Vec<f64>> {
    records
        .iter()
        .filter(|r| r.get("group").and_then(Value::as_str) == Some(group))
        .map(|r| {
            r.get(feature).and_then(Value::as_f64).ok_or_else(|| {
                CliError::data(format!(
                    "record {} has no numeric {feature:?}",
                    record_id(r)
                ))
            })
        })
        .collect()
}

fn write_plot_data(out: &Output, feature: &str, group: &str, values: &[f64]) -> CliResult<()> {
    let stem = format!(
        "plots/{}__{}",
        file_stem_safe(feature),
        file_stem_safe(group)
    );

    let h = histogram(values, None)?;
    let mut csv = String::from("bin_lo,bin_hi,count,density\n");
    for (k, (&count, &density)) in h.counts.iter().zip(&h.density).enumerate() {
        csv.push_str(&format!(
            "{},{},{count},{}\n",
            format_float(h.edges[k]),
            format_float(h.edges[k + 1]),
            format_float(density)
        ));
    }
    out.file_only(&format!("{stem}__hist.csv"), &csv)?;

    let k = kde(values, None)?;
    let mut csv = String::from("x,density\n");
    for (x, d) in k.grid.iter().zip(&k.density) {
        csv.push_str(&format!("{},{}\n", format_float(*x), format_float(*d)));
    }
    out.file_only(&format!("{stem}__kde.csv"), &csv)?;

    let e = ecdf(values)?;
    let mut csv = String::from("x,cdf\n");
    for (x, y) in e.x.iter().zip(&e.y) {
        csv.push_str(&format!("{},{}\n", format_float(*x), format_float(*y)));
    }
    out.file_only(&format!("{stem}__ecdf.csv"), &csv)?;
    Ok(())
}
