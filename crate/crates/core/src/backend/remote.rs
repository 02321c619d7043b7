use std::time::Duration;

use serde::Deserialize;
use serde_json::{json, Value};

use super::{BackendError, MaskedLanguageModel, MaskedQuery, TokenDistribution, WordSimilarity};

/// Environment variable holding the base URL of a served backend.
pub const BACKEND_URL_ENV: &str = "FUSIONLENS_BACKEND_URL";

/// Tokens sent per query when no explicit limit is configured.
pub const DEFAULT_MAX_CONTEXT: usize = 256;

/// Client for a masked-fill server.
///
/// `POST {base}/v1/masked_fill` with `{"tokens":[..],"mask_index":k,"candidates":[..]}`
/// answers `{"probabilities":{word:p},"dropped":[..]}`. `POST {base}/v1/similarity`
/// with `{"a":..,"b":..}` answers `{"similarity":x}`. Failures are non-200
/// responses carrying `{"error":".."}`.
#[derive(Debug, Clone)]
pub struct RemoteBackend {
    base_url: String,
    agent: ureq::Agent,
    max_context: usize,
}

impl RemoteBackend {
    pub fn new(base_url: impl Into<String>) -> Self {
        let base_url = base_url.into().trim_end_matches('/').to_string();
        Self {
            base_url,
            agent: http_agent(),
            max_context: DEFAULT_MAX_CONTEXT,
        }
    }

    pub fn from_env() -> Result<Self, BackendError> {
        match std::env::var(BACKEND_URL_ENV) {
            Ok(url) if !url.trim().is_empty() => Ok(Self::new(url)),
            _ => Err(BackendError::Transport(format!(
                "{BACKEND_URL_ENV} is not set"
            ))),
        }
    }

    pub fn with_max_context(mut self, max_context: usize) -> Self {
        self.max_context = max_context.max(1);
        self
    }

    pub fn base_url(&self) -> &str {
        &self.base_url
    }
}

pub(crate) fn http_agent() -> ureq::Agent {
    ureq::AgentBuilder::new()
        .timeout_connect(Duration::from_secs(10))
        .timeout(Duration::from_secs(120))
        .build()
}

/// POSTs a JSON body and decodes the JSON answer, mapping failures onto [`BackendError`].
pub(crate) fn post_json(
    agent: &ureq::Agent,
    url: &str,
    body: &Value,
) -> Result<Value, BackendError> {
    match agent.post(url).send_json(body) {
        Ok(resp) => resp
            .into_json::<Value>()
            .map_err(|e| BackendError::Protocol(format!("invalid JSON from {url}: {e}"))),
        Err(ureq::Error::Status(status, resp)) => {
            let message = resp
                .into_json::<Value>()
                .ok()
                .and_then(|v| v.get("error").and_then(Value::as_str).map(str::to_owned))
                .unwrap_or_else(|| "no error message".to_string());
            Err(BackendError::Status { status, message })
        }
        Err(ureq::Error::Transport(t)) => Err(BackendError::Transport(t.to_string())),
    }
}

#[derive(Deserialize)]
struct SimilarityResponse {
    similarity: f64,
}

impl MaskedLanguageModel for RemoteBackend {
    fn name(&self) -> &str {
        "remote"
    }

    fn query(&self, query: &MaskedQuery<'_>) -> Result<TokenDistribution, BackendError> {
        let (tokens, mask_index) = query.windowed(self.max_context);
        let body = json!({
            "tokens": tokens,
            "mask_index": mask_index,
            "candidates": query.candidates(),
        });
        let url = format!("{}/v1/masked_fill", self.base_url);
        let value = post_json(&self.agent, &url, &body)?;
        let dist: TokenDistribution = serde_json::from_value(value)
            .map_err(|e| BackendError::Protocol(format!("unexpected masked_fill response: {e}")))?;
        dist.validate(query)?;
        Ok(dist)
    }
}

impl WordSimilarity for RemoteBackend {
    fn similarity(&self, a: &str, b: &str) -> Result<f64, BackendError> {
        if a == b {
            return Ok(1.0);
        }
        let url = format!("{}/v1/similarity", self.base_url);
        let value = post_json(&self.agent, &url, &json!({ "a": a, "b": b }))?;
        let resp: SimilarityResponse = serde_json::from_value(value)
            .map_err(|e| BackendError::Protocol(format!("unexpected similarity response: {e}")))?;
        if !(0.0..=1.0).contains(&resp.similarity) {
            return Err(BackendError::Protocol(format!(
                "similarity {} outside [0, 1]",
                resp.similarity
            )));
        }
        Ok(resp.similarity)
    }
}
