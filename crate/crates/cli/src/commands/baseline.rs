use fusionlens_core::{
    builtin_lexicon, nuai, segment, to_canonical_line, uai, vri_fusion, BaselineScore,
    CategoryDictionary, Role,
};
use serde::Serialize;

use super::{lexicon_arg, load_corpus, report_failure};
use crate::args::{BaselineArgs, BaselineKind, GlobalArgs};
use crate::error::{CliError, CliResult, Status};
use crate::output::Output;

#[derive(Serialize)]
struct BaselineRecord<'a> {
    id: &'a str,
    #[serde(flatten)]
    score: BaselineScore,
    #[serde(skip_serializing_if = "Option::is_none")]
    group: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    truth_score: Option<f64>,
}

pub fn baseline(g: &GlobalArgs, a: &BaselineArgs) -> CliResult {
    let docs = load_corpus(&a.corpus)?;
    let dict = match &a.dict {
        Some(p) => CategoryDictionary::from_path(p)
            .map_err(|e| CliError::usage(format!("{}: {e}", p.display())))?,
        None => CategoryDictionary::demo(),
    };
    let kinship = match lexicon_arg(Role::Kinship, a.kinship.as_deref())? {
        Some(l) => l,
        None => builtin_lexicon(Role::Kinship)?,
    };

    let mut failures = 0;
    let mut segmented = Vec::new();
    for doc in &docs {
        match segment(doc) {
            Ok(s) => segmented.push(s),
            Err(e) => {
                failures += 1;
                report_failure(&doc.id, &e);
            }
        }
    }

    let scores: Vec<BaselineScore> = match a.method {
        BaselineKind::Uai => {
            uai(&segmented, &dict)
                .map_err(|e| CliError::data(e.to_string()))?
                .scores
        }
        BaselineKind::Vri | BaselineKind::Nuai => {
            let mut scores = Vec::with_capacity(segmented.len());
            for doc in &segmented {
                scores.push(match a.method {
                    BaselineKind::Vri => vri_fusion(doc, &kinship)?,
                    _ => nuai(doc, &dict)?,
                });
            }
            scores
        }
    };

    let mut lines = String::new();
    for (doc, score) in segmented.iter().zip(scores) {
        let rec = BaselineRecord {
            id: &doc.document.id,
            score,
            group: doc.document.group.as_deref(),
            truth_score: doc.document.truth_score,
        };
        lines.push_str(&to_canonical_line(&rec)?);
        lines.push('\n');
    }
    Output::new(g.out.as_deref())?.primary("baselines.jsonl", &lines)?;
    Ok(if failures > 0 {
        Status::Partial
    } else {
        Status::Success
    })
}
