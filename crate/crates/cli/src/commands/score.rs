use fusionlens_core::{
    builtin_lexicon, predict_corpus, score_corpus, to_canonical_line, CoarseProvider,
    FeatureWeights, FineProvider, HeuristicFine, RemotePredictor, Role, ScoringParams,
    ThresholdCoarse,
};

use super::{lexicon_arg, load_corpus, report_failure};
use crate::args::{GlobalArgs, ScoreArgs};
use crate::error::{status_of, CliError, CliResult, Status};
use crate::output::Output;
use crate::Backend;

pub fn score(g: &GlobalArgs, a: &ScoreArgs) -> CliResult {
    let docs = load_corpus(&a.corpus)?;
    let lexicon = |role, arg: Option<&str>| -> CliResult<_> {
        match lexicon_arg(role, arg)? {
            Some(l) => Ok(l),
            None => Ok(builtin_lexicon(role)?),
        }
    };
    let params = ScoringParams::new(
        g.alpha,
        lexicon(Role::Identity, a.identity.as_deref())?,
        lexicon(Role::Kinship, a.kinship.as_deref())?,
        lexicon(Role::Target, g.targets.as_deref())?,
    )?;
    let backend = Backend::from_args(g)?;
    let out = Output::new(g.out.as_deref())?;

    let (name, results) = if a.features_only {
        let results: Vec<_> = docs
            .iter()
            .zip(score_corpus(&docs, &params, &backend))
            .map(|(doc, r)| r.and_then(|f| to_canonical_line(&f.record(&doc.id))))
            .collect();
        ("features.jsonl", results)
    } else {
        let remote;
        let heuristic;
        let threshold = ThresholdCoarse::default();
        let (fine, coarse): (&dyn FineProvider, &dyn CoarseProvider) = match &a.predictor_url {
            Some(url) => {
                remote = RemotePredictor::new(url.clone());
                (&remote, &remote)
            }
            None => {
                heuristic = HeuristicFine::new(FeatureWeights::default(), a.s_norm)
                    .map_err(|e| CliError::usage(e.to_string()))?;
                (&heuristic, &threshold)
            }
        };
        let results: Vec<_> = docs
            .iter()
            .zip(predict_corpus(&docs, &params, &backend, fine, coarse))
            .map(|(doc, r)| r.and_then(|p| to_canonical_line(&p.record(doc))))
            .collect();
        ("predictions.jsonl", results)
    };

    let mut lines = String::new();
    let mut failed = Vec::new();
    for (doc, res) in docs.iter().zip(results) {
        match res {
            Ok(line) => {
                lines.push_str(&line);
                lines.push('\n');
            }
            Err(e) => {
                report_failure(&doc.id, &e);
                failed.push(status_of(&e));
            }
        }
    }
    out.primary(name, &lines)?;

    if failed.is_empty() {
        return Ok(Status::Success);
    }
    if failed.len() == docs.len() && failed.iter().all(|s| *s == Status::Io) {
        return Err(CliError::io(
            "every document failed; the backend or predictor is unreachable",
        ));
    }
    log::warn!("{} of {} documents failed", failed.len(), docs.len());
    Ok(Status::Partial)
}
