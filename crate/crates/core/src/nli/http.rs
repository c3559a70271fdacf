//! Client for the NLI classification service.
//!
//! Wire protocol:
//!
//! * `POST {endpoint}/v1/classify` with
//!   `{"pairs": [{"premise": ..., "hypothesis": ...}, ...]}` returns
//!   `{"results": [{"entailment": p, "neutral": p, "contradiction": p}, ...], "model": "..."}`,
//!   one result per pair in request order.
//! * `GET {endpoint}/v1/health` returns 200 with `{"model": "..."}` once
//!   the model is loaded, 503 before.

use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::{BackendError, ClassifierBackend, NliDistribution, NliPair};

#[derive(Serialize)]
struct ClassifyRequest<'a> {
    pairs: &'a [NliPair<'a>],
}

#[derive(Deserialize)]
struct ClassifyResponse {
    results: Vec<NliDistribution>,
}

#[derive(Deserialize)]
struct HealthResponse {
    #[serde(default)]
    model: Option<String>,
}

/// HTTP-backed classifier.
#[derive(Debug, Clone)]
pub struct HttpBackend {
    endpoint: String,
    agent: ureq::Agent,
}

impl HttpBackend {
    pub fn new(endpoint: &str) -> Self {
        Self::with_timeout(endpoint, Duration::from_secs(120))
    }

    pub fn with_timeout(endpoint: &str, timeout: Duration) -> Self {
        HttpBackend {
            endpoint: endpoint.trim_end_matches('/').to_owned(),
            agent: ureq::AgentBuilder::new().timeout(timeout).build(),
        }
    }

    pub fn endpoint(&self) -> &str {
        &self.endpoint
    }

    /// Model identifier reported by the service.
    pub fn health(&self) -> Result<String, BackendError> {
        let response = self
            .agent
            .get(&format!("{}/v1/health", self.endpoint))
            .call()
            .map_err(map_error)?;
        let body: HealthResponse = response
            .into_json()
            .map_err(|e| BackendError::Decode(e.to_string()))?;
        Ok(body.model.unwrap_or_default())
    }
}

fn map_error(err: ureq::Error) -> BackendError {
    match err {
        ureq::Error::Status(status, response) => BackendError::Status {
            status,
            body: response.into_string().unwrap_or_default(),
        },
        ureq::Error::Transport(t) => BackendError::Transport(t.to_string()),
    }
}

impl ClassifierBackend for HttpBackend {
    fn classify_batch(&self, pairs: &[NliPair<'_>]) -> Result<Vec<NliDistribution>, BackendError> {
        if pairs.is_empty() {
            return Ok(Vec::new());
        }
        let response = self
            .agent
            .post(&format!("{}/v1/classify", self.endpoint))
            .send_json(ClassifyRequest { pairs })
            .map_err(map_error)?;
        let body: ClassifyResponse = response
            .into_json()
            .map_err(|e| BackendError::Decode(e.to_string()))?;
        if body.results.len() != pairs.len() {
            return Err(BackendError::Shape {
                expected: pairs.len(),
                got: body.results.len(),
            });
        }
        Ok(body.results)
    }

    fn describe(&self) -> String {
        format!("http:{}", self.endpoint)
    }
}
