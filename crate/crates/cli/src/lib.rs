//! The `fusionlens` command-line tool.
//!
//! Exit statuses: 0 success, 1 I/O failure, 2 partial failure (some
//! documents failed and are listed on stderr), 64 usage error, 65 bad data.

pub mod args;
mod commands;
pub mod error;
mod output;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;
use fusionlens_core::backend::{BackendError, MaskedQuery, TokenDistribution};
use fusionlens_core::{
    HashBackend, MaskedLanguageModel, RemoteBackend, UniformBackend, WordSimilarity,
    BACKEND_URL_ENV,
};

use crate::args::{BackendKind, Cli, Command, GlobalArgs};
use crate::error::{CliError, CliResult, Status};

/// Parses `argv`, runs the command, and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Status::Success.code(),
                _ => Status::Usage.code(),
            };
        }
    };
    match dispatch(&cli) {
        Ok(status) => status.code(),
        Err(e) => {
            eprintln!("fusionlens: {e}");
            e.status.code()
        }
    }
}

fn dispatch(cli: &Cli) -> CliResult {
    let g = &cli.global;
    match &cli.command {
        Command::Score(a) => commands::score(g, a),
        Command::Prepare(a) => commands::prepare(g, a),
        Command::Evaluate(a) => commands::evaluate(g, a),
        Command::Compare(a) => commands::compare(g, a),
        Command::Baseline(a) => commands::baseline(g, a),
        Command::VocabExpand(a) => commands::vocab_expand(g, a),
    }
}

/// The backend chosen on the command line.
pub enum Backend {
    Uniform(UniformBackend),
    Hash(HashBackend),
    Remote(RemoteBackend),
}

impl Backend {
    pub fn from_args(g: &GlobalArgs) -> CliResult<Self> {
        Ok(match g.backend {
            BackendKind::Uniform => Backend::Uniform(
                UniformBackend::new(g.vocab_size).map_err(|e| CliError::usage(e.to_string()))?,
            ),
            BackendKind::Hash => Backend::Hash(HashBackend::new(g.seed.unwrap_or(0))),
            BackendKind::Remote => {
                let url = match &g.backend_url {
                    Some(url) => url.clone(),
                    None => std::env::var(BACKEND_URL_ENV).map_err(|_| {
                        CliError::usage(format!(
                            "--backend remote needs --backend-url or ${BACKEND_URL_ENV}"
                        ))
                    })?,
                };
                Backend::Remote(RemoteBackend::new(url))
            }
        })
    }
}

impl MaskedLanguageModel for Backend {
    fn name(&self) -> &str {
        match self {
            Backend::Uniform(b) => b.name(),
            Backend::Hash(b) => b.name(),
            Backend::Remote(b) => b.name(),
        }
    }

    fn query(&self, q: &MaskedQuery<'_>) -> Result<TokenDistribution, BackendError> {
        match self {
            Backend::Uniform(b) => b.query(q),
            Backend::Hash(b) => b.query(q),
            Backend::Remote(b) => b.query(q),
        }
    }
}

impl WordSimilarity for Backend {
    fn similarity(&self, a: &str, b: &str) -> Result<f64, BackendError> {
        match self {
            Backend::Uniform(s) => s.similarity(a, b),
            Backend::Hash(s) => s.similarity(a, b),
            Backend::Remote(s) => s.similarity(a, b),
        }
    }
}
