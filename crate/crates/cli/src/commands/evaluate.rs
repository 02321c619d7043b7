use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use fusionlens_core::{evaluate_method, read_records, to_canonical_pretty, EvaluationReport};
use serde_json::Value;

use super::with_path;
use crate::args::{EvaluateArgs, GlobalArgs};
use crate::error::{CliError, CliResult, Status};
use crate::output::Output;

pub fn evaluate(g: &GlobalArgs, a: &EvaluateArgs) -> CliResult {
    let mut report = EvaluationReport::default();
    for path in &a.files {
        let records = read_predictions(path)?;
        for column in &a.columns {
            let (pred, truth) = paired_column(path, &records, column)?;
            let metrics = evaluate_method(&pred, &truth)
                .map_err(|e| CliError::data(format!("{} [{column}]: {e}", path.display())))?;
            let key = if a.files.len() == 1 {
                column.clone()
            } else {
                let stem = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default();
                format!("{stem}:{column}")
            };
            if report.methods.insert(key.clone(), metrics).is_some() {
                return Err(CliError::usage(format!("method {key:?} appears twice")));
            }
        }
    }
    let out = Output::new(g.out.as_deref())?;
    out.primary("evaluation.json", &to_canonical_pretty(&report)?)?;
    Ok(Status::Success)
}

fn read_predictions(path: &Path) -> CliResult<Vec<Value>> {
    let file = File::open(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    read_records(BufReader::new(file)).map_err(|e| with_path(path, e))
}

fn paired_column(path: &Path, records: &[Value], column: &str) -> CliResult<(Vec<f64>, Vec<f64>)> {
    let mut pred = Vec::with_capacity(records.len());
    let mut truth = Vec::with_capacity(records.len());
    for (i, r) in records.iter().enumerate() {
        let id = r
            .get("id")
            .and_then(Value::as_str)
            .map_or_else(|| format!("#{}", i + 1), str::to_owned);
        let field = |name: &str| {
            r.get(name).and_then(Value::as_f64).ok_or_else(|| {
                CliError::data(format!(
                    "{}: record {id} has no numeric {name:?}",
                    path.display()
                ))
            })
        };
        pred.push(field(column)?);
        truth.push(field("truth_score")?);
    }
    Ok((pred, truth))
}
