//! Masked-language-model backends.
//!
//! A backend answers one question: with the token at `mask_index` hidden,
//! how much softmax mass does the model put on each candidate word? Values
//! are the model's probabilities for each candidate at that position and are
//! not renormalised over the candidate set.
//!
//! Three implementations ship with the crate:
//! - [`UniformBackend`]: every candidate gets `1 / vocab_size`.
//! - [`HashBackend`]: a seeded, context-sensitive hash in `[0, 1)`.
//! - [`RemoteBackend`]: a JSON-over-HTTP client for a served model.
//!
//! Backends also act as [`WordSimilarity`] providers for target expansion.

mod embedding;
mod remote;
mod stub;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use embedding::EmbeddingSimilarity;
pub(crate) use remote::{http_agent, post_json};
pub use remote::{RemoteBackend, BACKEND_URL_ENV, DEFAULT_MAX_CONTEXT};
pub use stub::{stable_hash, HashBackend, PrefixSimilarity, UniformBackend};

/// Token substituted at the masked position when a query is rendered as text.
pub const MASK_TOKEN: &str = "[MASK]";

#[derive(Debug, Clone, Error, PartialEq)]
pub enum BackendError {
    /// The backend could not be reached or timed out. Safe to retry.
    #[error("backend unavailable: {0}")]
    Transport(String),

    /// The backend answered with a non-success status.
    #[error("backend returned status {status}: {message}")]
    Status { status: u16, message: String },

    /// The query itself violates the query contract.
    #[error("malformed query: {0}")]
    InvalidQuery(String),

    /// The backend answered, but the answer breaks the response contract.
    #[error("malformed backend response: {0}")]
    Protocol(String),
}

impl BackendError {
    pub fn is_retriable(&self) -> bool {
        match self {
            BackendError::Transport(_) => true,
            BackendError::Status { status, .. } => *status == 429 || *status >= 500,
            BackendError::InvalidQuery(_) | BackendError::Protocol(_) => false,
        }
    }
}

/// One masked position inside a token sequence together with the words to score there.
#[derive(Debug, Clone, Copy)]
pub struct MaskedQuery<'a> {
    tokens: &'a [String],
    mask_index: usize,
    candidates: &'a [String],
}

impl<'a> MaskedQuery<'a> {
    pub fn new(
        tokens: &'a [String],
        mask_index: usize,
        candidates: &'a [String],
    ) -> Result<Self, BackendError> {
        if mask_index >= tokens.len() {
            return Err(BackendError::InvalidQuery(format!(
                "mask index {mask_index} out of range for {} tokens",
                tokens.len()
            )));
        }
        if candidates.is_empty() {
            return Err(BackendError::InvalidQuery("empty candidate set".into()));
        }
        Ok(Self {
            tokens,
            mask_index,
            candidates,
        })
    }

    pub fn tokens(&self) -> &'a [String] {
        self.tokens
    }

    pub fn mask_index(&self) -> usize {
        self.mask_index
    }

    pub fn candidates(&self) -> &'a [String] {
        self.candidates
    }

    /// Restricts the tokens to at most `max_tokens` around the mask.
    ///
    /// Returns the windowed tokens and the mask position inside the window.
    pub fn windowed(&self, max_tokens: usize) -> (&'a [String], usize) {
        let (start, end) = context_window(self.tokens.len(), self.mask_index, max_tokens);
        (&self.tokens[start..end], self.mask_index - start)
    }
}

/// Half-open `[start, end)` window of at most `max_len` positions containing `center`.
///
/// The window is symmetric around `center` where the sequence allows it; when
/// one side runs out, the spare room goes to the other side.
pub fn context_window(len: usize, center: usize, max_len: usize) -> (usize, usize) {
    debug_assert!(center < len);
    let max_len = max_len.max(1);
    if len <= max_len {
        return (0, len);
    }
    let before = (max_len - 1) / 2;
    let start = center.saturating_sub(before).min(len - max_len);
    (start, start + max_len)
}

/// Candidate probabilities at one masked position.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TokenDistribution {
    pub probabilities: BTreeMap<String, f64>,
    /// Candidates the backend refused to score (multi-subtoken words).
    #[serde(default)]
    pub dropped: Vec<String>,
}

impl TokenDistribution {
    /// Probability for `word`; dropped or missing candidates count as zero.
    pub fn get(&self, word: &str) -> f64 {
        self.probabilities.get(word).copied().unwrap_or(0.0)
    }

    /// Checks the response contract against the query that produced it.
    pub fn validate(&self, query: &MaskedQuery<'_>) -> Result<(), BackendError> {
        for (word, &p) in &self.probabilities {
            if !query.candidates().iter().any(|c| c == word) {
                return Err(BackendError::Protocol(format!(
                    "probability returned for non-candidate {word:?}"
                )));
            }
            if !(0.0..=1.0).contains(&p) {
                return Err(BackendError::Protocol(format!(
                    "probability {p} for {word:?} outside [0, 1]"
                )));
            }
        }
        Ok(())
    }
}

pub trait MaskedLanguageModel: Send + Sync {
    /// Short tag used in diagnostics and output records.
    fn name(&self) -> &str;

    fn query(&self, query: &MaskedQuery<'_>) -> Result<TokenDistribution, BackendError>;
}

/// Symmetric word similarity in `[0, 1]`; unknown words score 0.
pub trait WordSimilarity: Send + Sync {
    fn similarity(&self, a: &str, b: &str) -> Result<f64, BackendError>;
}

impl<T: MaskedLanguageModel + ?Sized> MaskedLanguageModel for &T {
    fn name(&self) -> &str {
        (**self).name()
    }

    fn query(&self, query: &MaskedQuery<'_>) -> Result<TokenDistribution, BackendError> {
        (**self).query(query)
    }
}

impl<T: MaskedLanguageModel + ?Sized> MaskedLanguageModel for Box<T> {
    fn name(&self) -> &str {
        (**self).name()
    }

    fn query(&self, query: &MaskedQuery<'_>) -> Result<TokenDistribution, BackendError> {
        (**self).query(query)
    }
}

impl<T: WordSimilarity + ?Sized> WordSimilarity for &T {
    fn similarity(&self, a: &str, b: &str) -> Result<f64, BackendError> {
        (**self).similarity(a, b)
    }
}

impl<T: WordSimilarity + ?Sized> WordSimilarity for Box<T> {
    fn similarity(&self, a: &str, b: &str) -> Result<f64, BackendError> {
        (**self).similarity(a, b)
    }
}
