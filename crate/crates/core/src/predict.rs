//! Fine (1-7) and coarse (low/medium/high) fusion predictions from metaphor features.
//!
//! Predictions go through two pluggable providers. The defaults are a
//! monotone calibration heuristic ([`HeuristicFine`]) and fixed cut points
//! on the fine score ([`ThresholdCoarse`]); [`RemotePredictor`] forwards the
//! features to a served model instead.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::backend::{http_agent, post_json, MaskedLanguageModel};
use crate::error::{Error, Result};
use crate::scoring::{score_features, AnchorCounts, FusionFeatures, ScoringParams};
use crate::text::Document;

pub const FINE_MIN: f64 = 1.0;
pub const FINE_MAX: f64 = 7.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoarseClass {
    Low,
    Medium,
    High,
}

impl fmt::Display for CoarseClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoarseClass::Low => "low",
            CoarseClass::Medium => "medium",
            CoarseClass::High => "high",
        })
    }
}

impl FromStr for CoarseClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "low" => Ok(CoarseClass::Low),
            "medium" => Ok(CoarseClass::Medium),
            "high" => Ok(CoarseClass::High),
            other => Err(Error::Parse(format!("unknown coarse class {other:?}"))),
        }
    }
}

pub trait FineProvider: Send + Sync {
    fn name(&self) -> &str;

    /// Fine score; callers clamp the result to `[1, 7]`.
    fn predict_fine(&self, features: &FusionFeatures) -> Result<f64>;
}

pub trait CoarseProvider: Send + Sync {
    fn name(&self) -> &str;

    fn predict_coarse(&self, fine_score: f64, features: &FusionFeatures) -> Result<CoarseClass>;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureWeights {
    pub proximity: f64,
    pub kinship: f64,
    pub identity_to_target: f64,
    pub target_to_identity: f64,
}

impl Default for FeatureWeights {
    fn default() -> Self {
        Self {
            proximity: 1.0,
            kinship: 1.0,
            identity_to_target: 1.0,
            target_to_identity: 1.0,
        }
    }
}

/// `fine = 1 + 6 · min(1, (w·features) / s_norm)`.
///
/// Stand-in for a trained regressor. With nonnegative weights it is
/// nondecreasing in every feature and saturates at 7.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeuristicFine {
    weights: FeatureWeights,
    s_norm: f64,
}

impl HeuristicFine {
    pub const DEFAULT_S_NORM: f64 = 0.02;

    pub fn new(weights: FeatureWeights, s_norm: f64) -> Result<Self> {
        let w = [
            weights.proximity,
            weights.kinship,
            weights.identity_to_target,
            weights.target_to_identity,
        ];
        if w.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::Config(
                "heuristic weights must be finite and nonnegative".into(),
            ));
        }
        if !(s_norm.is_finite() && s_norm > 0.0) {
            return Err(Error::Config(format!("s_norm {s_norm} must be positive")));
        }
        Ok(Self { weights, s_norm })
    }

    pub fn s_norm(&self) -> f64 {
        self.s_norm
    }
}

impl Default for HeuristicFine {
    fn default() -> Self {
        Self {
            weights: FeatureWeights::default(),
            s_norm: Self::DEFAULT_S_NORM,
        }
    }
}

impl FineProvider for HeuristicFine {
    fn name(&self) -> &str {
        "heuristic"
    }

    fn predict_fine(&self, f: &FusionFeatures) -> Result<f64> {
        let w = &self.weights;
        let combined = w.proximity * f.proximity
            + w.kinship * f.k_f.value
            + w.identity_to_target * f.s_i_to_t.value
            + w.target_to_identity * f.s_t_to_i.value;
        let fine = FINE_MIN + (FINE_MAX - FINE_MIN) * (combined / self.s_norm).min(1.0);
        Ok(fine.clamp(FINE_MIN, FINE_MAX))
    }
}

/// `low < medium <= fine < high <= ...` on the fine score.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdCoarse {
    medium: f64,
    high: f64,
}

impl ThresholdCoarse {
    pub const DEFAULT_MEDIUM: f64 = 3.0;
    pub const DEFAULT_HIGH: f64 = 5.0;

    pub fn new(medium: f64, high: f64) -> Result<Self> {
        if !(FINE_MIN..=FINE_MAX).contains(&medium) || !(medium..=FINE_MAX).contains(&high) {
            return Err(Error::Config(format!(
                "coarse thresholds must satisfy 1 <= medium ({medium}) <= high ({high}) <= 7"
            )));
        }
        Ok(Self { medium, high })
    }

    pub fn high_threshold(&self) -> f64 {
        self.high
    }

    pub fn classify(&self, fine: f64) -> CoarseClass {
        if fine >= self.high {
            CoarseClass::High
        } else if fine >= self.medium {
            CoarseClass::Medium
        } else {
            CoarseClass::Low
        }
    }
}

impl Default for ThresholdCoarse {
    fn default() -> Self {
        Self {
            medium: Self::DEFAULT_MEDIUM,
            high: Self::DEFAULT_HIGH,
        }
    }
}

impl CoarseProvider for ThresholdCoarse {
    fn name(&self) -> &str {
        "threshold"
    }

    fn predict_coarse(&self, fine: f64, _: &FusionFeatures) -> Result<CoarseClass> {
        Ok(self.classify(fine))
    }
}

/// Forwards features to `POST {base}/v1/predict`.
///
/// Request: `{"features":{"s_i_to_t":..,"s_t_to_i":..,"k_f":..,"proximity":..,"anchors":{..},"alpha":..}}`.
/// Response: `{"fine":x,"coarse":"low|medium|high"}`.
#[derive(Debug, Clone)]
pub struct RemotePredictor {
    base_url: String,
    agent: ureq::Agent,
}

impl RemotePredictor {
    pub fn new(base_url: impl Into<String>) -> Self {
        Self {
            base_url: base_url.into().trim_end_matches('/').to_string(),
            agent: http_agent(),
        }
    }

    fn call(&self, f: &FusionFeatures) -> Result<Value> {
        let body = json!({
            "features": {
                "s_i_to_t": f.s_i_to_t.value,
                "s_t_to_i": f.s_t_to_i.value,
                "k_f": f.k_f.value,
                "proximity": f.proximity,
                "anchors": {
                    "identity": f.identity_anchors(),
                    "target": f.target_anchors(),
                },
                "alpha": f.alpha,
            }
        });
        Ok(post_json(
            &self.agent,
            &format!("{}/v1/predict", self.base_url),
            &body,
        )?)
    }
}

impl FineProvider for RemotePredictor {
    fn name(&self) -> &str {
        "remote"
    }

    fn predict_fine(&self, f: &FusionFeatures) -> Result<f64> {
        let v = self.call(f)?;
        v.get("fine")
            .and_then(Value::as_f64)
            .filter(|x| x.is_finite())
            .ok_or_else(|| Error::Parse("predict response lacks a numeric \"fine\"".into()))
    }
}

impl CoarseProvider for RemotePredictor {
    fn name(&self) -> &str {
        "remote"
    }

    fn predict_coarse(&self, _: f64, f: &FusionFeatures) -> Result<CoarseClass> {
        let v = self.call(f)?;
        v.get("coarse")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("predict response lacks a string \"coarse\"".into()))?
            .parse()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FusionPrediction {
    pub fine_score: f64,
    pub coarse_class: CoarseClass,
    pub features: FusionFeatures,
    pub provider: String,
}

/// JSONL form of a prediction, carrying the document's group and truth score through.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub id: String,
    pub fine: f64,
    pub coarse: CoarseClass,
    pub s_i_to_t: f64,
    pub s_t_to_i: f64,
    pub k_f: f64,
    pub proximity: f64,
    pub anchors: AnchorCounts,
    pub alpha: f64,
    pub provider: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truth_score: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent_id: Option<String>,
}

impl FusionPrediction {
    pub fn record(&self, doc: &Document) -> PredictionRecord {
        let f = &self.features;
        PredictionRecord {
            id: doc.id.clone(),
            fine: self.fine_score,
            coarse: self.coarse_class,
            s_i_to_t: f.s_i_to_t.value,
            s_t_to_i: f.s_t_to_i.value,
            k_f: f.k_f.value,
            proximity: f.proximity,
            anchors: AnchorCounts {
                identity: f.identity_anchors(),
                target: f.target_anchors(),
            },
            alpha: f.alpha,
            provider: self.provider.clone(),
            group: doc.group.clone(),
            truth_score: doc.truth_score,
            parent_id: doc.parent_id.clone(),
        }
    }
}

pub fn predict_from_features(
    features: FusionFeatures,
    fine: &dyn FineProvider,
    coarse: &dyn CoarseProvider,
) -> Result<FusionPrediction> {
    let fine_score = fine.predict_fine(&features)?.clamp(FINE_MIN, FINE_MAX);
    let coarse_class = coarse.predict_coarse(fine_score, &features)?;
    Ok(FusionPrediction {
        fine_score,
        coarse_class,
        features,
        provider: format!("{}+{}", fine.name(), coarse.name()),
    })
}

pub fn predict(
    doc: &Document,
    params: &ScoringParams,
    backend: &dyn MaskedLanguageModel,
    fine: &dyn FineProvider,
    coarse: &dyn CoarseProvider,
) -> Result<FusionPrediction> {
    let features = score_features(doc, params, backend)?;
    predict_from_features(features, fine, coarse)
}

/// Predicts every document in parallel; results keep input order.
pub fn predict_corpus(
    docs: &[Document],
    params: &ScoringParams,
    backend: &dyn MaskedLanguageModel,
    fine: &dyn FineProvider,
    coarse: &dyn CoarseProvider,
) -> Vec<Result<FusionPrediction>> {
    docs.par_iter()
        .map(|doc| predict(doc, params, backend, fine, coarse))
        .collect()
}

/// Predictions whose coarse class is high, in input order.
pub fn filter_high_fusion(preds: &[FusionPrediction]) -> Vec<FusionPrediction> {
    preds
        .iter()
        .filter(|p| p.coarse_class == CoarseClass::High)
        .cloned()
        .collect()
}

/// [`filter_high_fusion`] for records read back from JSONL.
pub fn filter_high_fusion_records(records: &[PredictionRecord]) -> Vec<PredictionRecord> {
    records
        .iter()
        .filter(|r| r.coarse == CoarseClass::High)
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::UniformBackend;
    use crate::scoring::{Direction, DirectionalScore};

    fn features(prox: f64, kf: f64, it: f64, ti: f64) -> FusionFeatures {
        let d = |value, direction| DirectionalScore {
            value,
            anchor_count: usize::from(value > 0.0),
            direction,
            dropped: 0,
        };
        FusionFeatures {
            s_i_to_t: d(it, Direction::IdentityToTarget),
            s_t_to_i: d(ti, Direction::TargetToIdentity),
            k_f: d(kf, Direction::KinshipToTarget),
            proximity: prox,
            alpha: 0.25,
        }
    }

    #[test]
    fn heuristic_floor_and_saturation() {
        let h = HeuristicFine::default();
        let c = ThresholdCoarse::default();
        let p = predict_from_features(features(0.0, 0.0, 0.0, 0.0), &h, &c).unwrap();
        assert_eq!(p.fine_score, 1.0);
        assert_eq!(p.coarse_class, CoarseClass::Low);
        assert_eq!(p.provider, "heuristic+threshold");
        let p = predict_from_features(features(0.005, 0.005, 0.005, 0.005), &h, &c).unwrap();
        assert_eq!(p.fine_score, 7.0);
        assert_eq!(p.coarse_class, CoarseClass::High);
        let p = predict_from_features(features(1.0, 1.0, 1.0, 1.0), &h, &c).unwrap();
        assert_eq!(p.fine_score, 7.0);
    }

    #[test]
    fn threshold_classes() {
        let c = ThresholdCoarse::default();
        assert_eq!(c.classify(2.999), CoarseClass::Low);
        assert_eq!(c.classify(3.0), CoarseClass::Medium);
        assert_eq!(c.classify(4.999), CoarseClass::Medium);
        assert_eq!(c.classify(5.0), CoarseClass::High);
        assert!(ThresholdCoarse::new(5.0, 3.0).is_err());
        assert!(ThresholdCoarse::new(0.5, 3.0).is_err());
    }

    #[test]
    fn heuristic_validation() {
        let mut w = FeatureWeights::default();
        assert!(HeuristicFine::new(w, 0.0).is_err());
        w.kinship = -1.0;
        assert!(HeuristicFine::new(w, 0.02).is_err());
    }

    #[test]
    fn high_fusion_filter() {
        let h = HeuristicFine::default();
        let c = ThresholdCoarse::default();
        assert!(filter_high_fusion(&[]).is_empty());
        let preds: Vec<_> = [0.0, 0.02, 0.002, 0.015]
            .iter()
            .map(|&x| predict_from_features(features(x, 0.0, 0.0, 0.0), &h, &c).unwrap())
            .collect();
        let high = filter_high_fusion(&preds);
        assert_eq!(high.len(), 2);
        assert_eq!(high[0], preds[1]);
        assert_eq!(high[1], preds[3]);
    }

    #[test]
    fn coarse_parse() {
        assert_eq!("High".parse::<CoarseClass>().unwrap(), CoarseClass::High);
        assert!("extreme".parse::<CoarseClass>().is_err());
        assert_eq!(
            serde_json::to_string(&CoarseClass::Medium).unwrap(),
            "\"medium\""
        );
    }

    #[test]
    fn corpus_prediction_keeps_order_and_errors() {
        let params = ScoringParams::builtin(0.25).unwrap();
        let backend = UniformBackend::new(100).unwrap();
        let docs = vec![
            Document::new("a", "I love my group"),
            Document::new("b", ""),
            Document::new("c", "my family is my community").with_group("g"),
        ];
        let out = predict_corpus(
            &docs,
            &params,
            &backend,
            &HeuristicFine::default(),
            &ThresholdCoarse::default(),
        );
        assert_eq!(out.len(), 3);
        assert!(out[0].is_ok() && out[1].is_err() && out[2].is_ok());
        let rec = out[2].as_ref().unwrap().record(&docs[2]);
        assert_eq!(rec.id, "c");
        assert_eq!(rec.group.as_deref(), Some("g"));
    }
}
