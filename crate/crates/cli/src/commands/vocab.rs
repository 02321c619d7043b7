use fusionlens_core::{
    expand_targets, EmbeddingSimilarity, ExpansionConfig, Lexicon, Role, WordSimilarity,
};

use super::lexicon_arg;
use crate::args::{GlobalArgs, VocabExpandArgs};
use crate::error::{CliError, CliResult, Status};
use crate::output::Output;
use crate::Backend;

pub fn vocab_expand(g: &GlobalArgs, a: &VocabExpandArgs) -> CliResult {
    let user = match lexicon_arg(Role::Target, g.targets.as_deref())? {
        Some(l) => l,
        None => Lexicon::new("targets", Role::Target, Vec::<String>::new())?,
    };
    let pool = lexicon_arg(Role::Target, Some(&a.pool))?.expect("pool is required");
    let config = ExpansionConfig::new(a.top_k, a.threshold, pool)
        .map_err(|e| CliError::usage(e.to_string()))?;

    let embeddings;
    let backend;
    let similarity: &dyn WordSimilarity = match &a.embeddings {
        Some(path) => {
            embeddings =
                EmbeddingSimilarity::from_path(path).map_err(|e| super::with_path(path, e))?;
            &embeddings
        }
        None => {
            backend = Backend::from_args(g)?;
            &backend
        }
    };
    let expanded = expand_targets(&user, &config, similarity)?;
    let mut text = String::new();
    for w in expanded.words() {
        text.push_str(w);
        text.push('\n');
    }
    Output::new(g.out.as_deref())?.primary("targets.txt", &text)?;
    Ok(Status::Success)
}
