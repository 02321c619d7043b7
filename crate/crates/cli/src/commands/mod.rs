mod baseline;
mod compare;
mod evaluate;
mod prepare;
mod score;
mod vocab;

use std::path::Path;

use fusionlens_core::{read_corpus, Document, Lexicon, Role};
use serde_json::json;

use crate::error::{status_of, CliError, CliResult};

pub use baseline::baseline;
pub use compare::compare;
pub use evaluate::evaluate;
pub use prepare::prepare;
pub use score::score;
pub use vocab::vocab_expand;

fn load_corpus(path: &Path) -> CliResult<Vec<Document>> {
    read_corpus(path).map_err(|e| with_path(path, e))
}

fn with_path(path: &Path, e: fusionlens_core::Error) -> CliError {
    CliError {
        status: status_of(&e),
        message: format!("{}: {e}", path.display()),
    }
}

fn lexicon_arg(role: Role, arg: Option<&str>) -> CliResult<Option<Lexicon>> {
    arg.map(|a| Lexicon::from_arg(role, a))
        .transpose()
        .map_err(|e| match e {
            fusionlens_core::Error::Io(_) => CliError::from(e),
            other => CliError::usage(format!("{role} words: {other}")),
        })
}

/// One JSON line on stderr naming a document that could not be processed.
fn report_failure(id: &str, err: &dyn std::fmt::Display) {
    eprintln!("{}", json!({"id": id, "error": err.to_string()}));
}
