//! Dictionary baselines: VRI-Fusion, nUAI, and UAI.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::{SegmentedDocument, Tokens};
use crate::vocabulary::{Lexicon, Role};

const DEMO_DICTIONARY: &str = include_str!("../data/demo_dictionary.json");

/// Named word categories with signed weights.
#[derive(Debug, Clone, PartialEq)]
pub struct CategoryDictionary {
    categories: BTreeMap<String, Lexicon>,
    weights: BTreeMap<String, f64>,
}

#[derive(Deserialize)]
struct DictionaryFile {
    categories: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    weights: BTreeMap<String, f64>,
}

impl CategoryDictionary {
    /// Categories without an explicit weight get +1.
    pub fn new(
        categories: BTreeMap<String, Lexicon>,
        weights: BTreeMap<String, f64>,
    ) -> Result<Self> {
        if categories.is_empty() {
            return Err(Error::invalid("category dictionary has no categories"));
        }
        for (name, w) in &weights {
            if !categories.contains_key(name) {
                return Err(Error::invalid(format!(
                    "weight given for unknown category {name:?}"
                )));
            }
            if !w.is_finite() {
                return Err(Error::invalid(format!("weight for {name:?} is not finite")));
            }
        }
        let weights = categories
            .keys()
            .map(|k| (k.clone(), weights.get(k).copied().unwrap_or(1.0)))
            .collect();
        Ok(Self {
            categories,
            weights,
        })
    }

    /// Parses `{"categories":{name:[words]},"weights":{name:w}}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: DictionaryFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("dictionary: {e}")))?;
        let categories = file
            .categories
            .into_iter()
            .map(|(name, words)| {
                let lex = Lexicon::new(name.clone(), Role::Category, words)?;
                Ok((name, lex))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        Self::new(categories, file.weights)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Small illustrative dictionary shipped with the crate. It is not LIWC.
    pub fn demo() -> Self {
        Self::from_json(DEMO_DICTIONARY).expect("bundled dictionary parses")
    }

    pub fn categories(&self) -> &BTreeMap<String, Lexicon> {
        &self.categories
    }

    pub fn weight(&self, category: &str) -> f64 {
        self.weights.get(category).copied().unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaselineMethod {
    VriFusion,
    Nuai,
    Uai,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineScore {
    pub method: BaselineMethod,
    pub value: f64,
    #[serde(default)]
    pub per_category: BTreeMap<String, f64>,
}

/// Share of sentences containing at least one kinship word.
pub fn vri_fusion(doc: &SegmentedDocument, kinship: &Lexicon) -> Result<BaselineScore> {
    if doc.sentences.is_empty() {
        return Err(Error::invalid(format!(
            "document {:?} has no sentences",
            doc.document.id
        )));
    }
    if kinship.is_empty() {
        return Err(Error::invalid("kinship lexicon is empty"));
    }
    let hits = doc
        .sentences
        .iter()
        .filter(|s| {
            Tokens::new(s)
                .normalized
                .iter()
                .any(|t| kinship.contains(t))
        })
        .count();
    Ok(BaselineScore {
        method: BaselineMethod::VriFusion,
        value: hits as f64 / doc.sentences.len() as f64,
        per_category: BTreeMap::new(),
    })
}

/// Fraction of the document's words falling in each category.
pub fn category_rates(
    doc: &SegmentedDocument,
    dict: &CategoryDictionary,
) -> Result<BTreeMap<String, f64>> {
    let tokens = Tokens::new(&doc.document.text);
    if tokens.is_empty() {
        return Err(Error::invalid(format!(
            "document {:?} has no words",
            doc.document.id
        )));
    }
    let total = tokens.len() as f64;
    Ok(dict
        .categories
        .iter()
        .map(|(name, lex)| {
            let n = tokens.normalized.iter().filter(|t| lex.contains(t)).count();
            (name.clone(), n as f64 / total)
        })
        .collect())
}

fn weighted_sum(values: &BTreeMap<String, f64>, dict: &CategoryDictionary) -> f64 {
    values.iter().map(|(name, v)| dict.weight(name) * v).sum()
}

/// Weighted sum of raw category rates.
pub fn nuai(doc: &SegmentedDocument, dict: &CategoryDictionary) -> Result<BaselineScore> {
    let rates = category_rates(doc, dict)?;
    Ok(BaselineScore {
        method: BaselineMethod::Nuai,
        value: weighted_sum(&rates, dict),
        per_category: rates,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct UaiOutput {
    pub scores: Vec<BaselineScore>,
    /// Categories with identical rates in every document; they contribute 0.
    pub zero_variance: Vec<String>,
}

/// Weighted sum of category rates z-scored across the corpus (population SD).
///
/// Needs at least two documents: a z-score is meaningless for a single sample.
pub fn uai(corpus: &[SegmentedDocument], dict: &CategoryDictionary) -> Result<UaiOutput> {
    if corpus.len() < 2 {
        return Err(Error::invalid(format!(
            "UAI needs a corpus of at least 2 documents, got {}",
            corpus.len()
        )));
    }
    let rates = corpus
        .iter()
        .map(|d| category_rates(d, dict))
        .collect::<Result<Vec<_>>>()?;

    let n = corpus.len() as f64;
    let mut z: Vec<BTreeMap<String, f64>> = vec![BTreeMap::new(); corpus.len()];
    let mut zero_variance = Vec::new();
    for name in dict.categories.keys() {
        let column: Vec<f64> = rates.iter().map(|r| r[name]).collect();
        if column.iter().all(|&v| v == column[0]) {
            log::warn!("category {name:?} has zero variance across the corpus; it contributes 0");
            zero_variance.push(name.clone());
            for zs in z.iter_mut() {
                zs.insert(name.clone(), 0.0);
            }
            continue;
        }
        let mean = column.iter().sum::<f64>() / n;
        let sd = (column.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
        for (zs, v) in z.iter_mut().zip(&column) {
            zs.insert(name.clone(), (v - mean) / sd);
        }
    }
    let scores = z
        .into_iter()
        .map(|per_category| BaselineScore {
            method: BaselineMethod::Uai,
            value: weighted_sum(&per_category, dict),
            per_category,
        })
        .collect();
    Ok(UaiOutput {
        scores,
        zero_variance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::{segment, Document};
    use crate::vocabulary::builtin_lexicon;

    fn seg(text: &str) -> SegmentedDocument {
        segment(&Document::new("d", text)).unwrap()
    }

    fn one_category(words: &[&str]) -> CategoryDictionary {
        let mut cats = BTreeMap::new();
        cats.insert(
            "affiliation".to_string(),
            Lexicon::new("affiliation", Role::Category, words).unwrap(),
        );
        CategoryDictionary::new(cats, BTreeMap::new()).unwrap()
    }

    #[test]
    fn vri_counts_sentences() {
        let kin = builtin_lexicon(Role::Kinship).unwrap();
        let d = seg("My brother came home. We ate. It rained. Nobody spoke.");
        assert_eq!(vri_fusion(&d, &kin).unwrap().value, 0.25);
        let d = seg("We ate. It rained.");
        assert_eq!(vri_fusion(&d, &kin).unwrap().value, 0.0);
        let d = seg("My family ate. The Family rested!");
        assert_eq!(vri_fusion(&d, &kin).unwrap().value, 1.0);
    }

    #[test]
    fn nuai_rate() {
        let dict = one_category(&["together", "friend"]);
        let s = nuai(
            &seg("we stood together with a friend and then went home"),
            &dict,
        )
        .unwrap();
        assert!((s.value - 0.2).abs() < 1e-15);
        assert!((s.per_category["affiliation"] - 0.2).abs() < 1e-15);
        let s = nuai(&seg("nothing matches here"), &dict).unwrap();
        assert_eq!(s.value, 0.0);
    }

    #[test]
    fn nuai_weights_cancel() {
        let json = r#"{"categories":{"a":["x"],"b":["y"]},"weights":{"a":1,"b":-1}}"#;
        let dict = CategoryDictionary::from_json(json).unwrap();
        let s = nuai(&seg("x y z w"), &dict).unwrap();
        assert_eq!(s.value, 0.0);
    }

    #[test]
    fn dictionary_validation() {
        assert!(CategoryDictionary::from_json(r#"{"categories":{}}"#).is_err());
        assert!(
            CategoryDictionary::from_json(r#"{"categories":{"a":["x"]},"weights":{"b":1}}"#)
                .is_err()
        );
        let d = CategoryDictionary::from_json(r#"{"categories":{"a":["x"]}}"#).unwrap();
        assert_eq!(d.weight("a"), 1.0);
        let demo = CategoryDictionary::demo();
        assert!(demo.categories().contains_key("affiliation"));
    }

    #[test]
    fn uai_hand_z_scores() {
        let dict = one_category(&["x"]);
        // rates 0.1 and 0.3
        let a = seg("x a b c d e f g h i");
        let b = seg("x x x a b c d e f g");
        let out = uai(&[a, b], &dict).unwrap();
        assert!((out.scores[0].value + 1.0).abs() < 1e-12);
        assert!((out.scores[1].value - 1.0).abs() < 1e-12);
        assert!(out.zero_variance.is_empty());
    }

    #[test]
    fn uai_degenerate_cases() {
        let dict = one_category(&["x"]);
        assert!(uai(&[seg("x y")], &dict).is_err());
        let out = uai(&[seg("x y"), seg("y x")], &dict).unwrap();
        assert_eq!(out.zero_variance, vec!["affiliation"]);
        assert!(out.scores.iter().all(|s| s.value == 0.0));
    }
}
