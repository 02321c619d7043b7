//! Canonical JSON output and evaluation reports.
//!
//! Canonical form sorts object keys and rounds every float to six
//! significant digits, so reruns with the same inputs are byte-identical.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Number, Value};

use crate::error::{Error, Result};
use crate::stats::{mae, significance_stars, spearman, PairedSample};

pub const SIGNIFICANT_DIGITS: usize = 6;

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits. Non-finite values pass through.
pub fn round_significant(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .unwrap_or(x)
}

/// Sorts keys recursively and rounds floats. Integers are left alone.
pub fn canonicalize(value: Value) -> Value {
    match value {
        Value::Object(map) => {
            let mut entries: Vec<(String, Value)> = map.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(
                entries
                    .into_iter()
                    .map(|(k, v)| (k, canonicalize(v)))
                    .collect::<Map<_, _>>(),
            )
        }
        Value::Array(items) => Value::Array(items.into_iter().map(canonicalize).collect()),
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            Number::from_f64(round_significant(x)).map_or(Value::Null, Value::Number)
        }
        other => other,
    }
}

fn canonical_value<T: Serialize + ?Sized>(value: &T) -> Result<Value> {
    let v = serde_json::to_value(value).map_err(|e| Error::Parse(format!("serialize: {e}")))?;
    Ok(canonicalize(v))
}

/// Compact single-line canonical JSON.
pub fn to_canonical_line<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    Ok(canonical_value(value)?.to_string())
}

/// Indented canonical JSON with a trailing newline.
pub fn to_canonical_pretty<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let v = canonical_value(value)?;
    let mut s =
        serde_json::to_string_pretty(&v).map_err(|e| Error::Parse(format!("serialize: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Plain decimal rendering of a rounded float for CSV cells.
pub fn format_float(x: f64) -> String {
    let r = round_significant(x);
    if r == 0.0 {
        "0".to_string()
    } else {
        format!("{r}")
    }
}

/// Agreement of one prediction column with the truth scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodMetrics {
    pub r_s: f64,
    pub p_value: f64,
    pub mae: f64,
    pub n: usize,
    /// `"**"` for p < 0.01, `"*"` for p < 0.05, empty otherwise.
    pub stars: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub methods: BTreeMap<String, MethodMetrics>,
}

pub const MIN_EVALUATION_N: usize = 3;

/// Spearman and MAE of `predicted` against `truth`. Needs at least three pairs.
pub fn evaluate_method(predicted: &[f64], truth: &[f64]) -> Result<MethodMetrics> {
    if predicted.len() < MIN_EVALUATION_N {
        return Err(Error::invalid(format!(
            "evaluation needs at least {MIN_EVALUATION_N} scored records, got {}",
            predicted.len()
        )));
    }
    let sample = PairedSample::new(predicted.to_vec(), truth.to_vec())?;
    let rho = spearman(&sample)?;
    Ok(MethodMetrics {
        r_s: rho.r_s,
        p_value: rho.p_value,
        mae: mae(&sample),
        n: rho.n,
        stars: significance_stars(rho.p_value).to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn rounding() {
        assert_eq!(round_significant(0.1234567), 0.123457);
        assert_eq!(round_significant(123456789.0), 123457000.0);
        assert_eq!(round_significant(-2.0 / 3.0), -0.666667);
        assert_eq!(round_significant(1e-300 / 3.0), 3.33333e-301);
        assert_eq!(round_significant(-0.0), 0.0);
        assert!(round_significant(f64::NAN).is_nan());
    }

    #[test]
    fn canonical_sorting_and_rounding() {
        let v = json!({"b": 1.0 / 3.0, "a": {"z": 1, "y": [0.1 + 0.2]}});
        assert_eq!(
            to_canonical_line(&v).unwrap(),
            r#"{"a":{"y":[0.3],"z":1},"b":0.333333}"#
        );
        let pretty = to_canonical_pretty(&v).unwrap();
        assert!(pretty.ends_with("}\n"));
        assert!(pretty.find("\"a\"").unwrap() < pretty.find("\"b\"").unwrap());
    }

    #[test]
    fn float_cells() {
        assert_eq!(format_float(0.0), "0");
        assert_eq!(format_float(2.0), "2");
        assert_eq!(format_float(1.0 / 7.0), "0.142857");
    }

    #[test]
    fn evaluation_extremes() {
        let t = [1.0, 2.0, 3.0, 4.0, 5.0];
        let m = evaluate_method(&t, &t).unwrap();
        assert_eq!((m.r_s, m.mae, m.n), (1.0, 0.0, 5));
        let rev: Vec<f64> = t.iter().rev().copied().collect();
        assert_eq!(evaluate_method(&rev, &t).unwrap().r_s, -1.0);
        assert!(evaluate_method(&t[..2], &t[..2]).is_err());
    }
}
