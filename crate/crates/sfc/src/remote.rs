//! Client for the contextual-embedding service.
//!
//! `POST {base}/embed` with `{"texts": [...]}` answers
//! `{"dim": D, "embeddings": [[...], ...]}`; `GET {base}/health` answers
//! `{"status": "ok", "dim": D}`.

use std::time::Duration;

use serde::{Deserialize, Serialize};
use sfc_core::{EmbeddingMatrix, Matrix};
use ureq::Agent;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemoteEndpointConfig {
    pub base_url: String,
    pub timeout_ms: u64,
    pub expected_dim: usize,
    pub max_batch: usize,
    /// Batch requests in flight at once.
    pub concurrency: usize,
}

impl RemoteEndpointConfig {
    /// 1024 dimensions, 32 texts per request, 10 s timeout.
    pub fn new(base_url: impl Into<String>) -> Self {
        RemoteEndpointConfig {
            base_url: base_url.into(),
            timeout_ms: 10_000,
            expected_dim: 1024,
            max_batch: 32,
            concurrency: 4,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Argument(format!("remote endpoint: {m}")));
        if self.base_url.is_empty() {
            return bad("empty base URL");
        }
        if self.timeout_ms == 0 {
            return bad("timeout must be positive");
        }
        if self.expected_dim == 0 {
            return bad("expected dimension must be positive");
        }
        if self.max_batch == 0 || self.concurrency == 0 {
            return bad("batch size and concurrency must be at least 1");
        }
        Ok(())
    }

    fn agent(&self) -> Agent {
        Agent::config_builder()
            .timeout_global(Some(Duration::from_millis(self.timeout_ms)))
            .build()
            .into()
    }

    fn url(&self, path: &str) -> String {
        format!("{}/{path}", self.base_url.trim_end_matches('/'))
    }
}

#[derive(Serialize)]
struct EmbedRequest<'a> {
    texts: &'a [String],
}

#[derive(Deserialize)]
struct EmbedResponse {
    dim: usize,
    embeddings: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Health {
    pub status: String,
    pub dim: usize,
}

fn transport(url: &str, e: ureq::Error) -> Error {
    Error::Endpoint(format!("{url}: {e}"))
}

fn read_body<T: for<'de> Deserialize<'de>>(
    url: &str,
    resp: ureq::http::Response<ureq::Body>,
) -> Result<T> {
    let text = resp
        .into_body()
        .read_to_string()
        .map_err(|e| transport(url, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Contract(format!("{url}: malformed body: {e}")))
}

pub fn health(config: &RemoteEndpointConfig) -> Result<Health> {
    config.validate()?;
    let url = config.url("health");
    let resp = config
        .agent()
        .get(&url)
        .call()
        .map_err(|e| transport(&url, e))?;
    read_body(&url, resp)
}

fn embed_batch(
    agent: &Agent,
    config: &RemoteEndpointConfig,
    texts: &[String],
) -> Result<Vec<Vec<f64>>> {
    let url = config.url("embed");
    let resp = agent
        .post(&url)
        .send_json(EmbedRequest { texts })
        .map_err(|e| transport(&url, e))?;
    let body: EmbedResponse = read_body(&url, resp)?;
    if body.dim != config.expected_dim {
        return Err(Error::Contract(format!(
            "service reports dimension {}, expected {}",
            body.dim, config.expected_dim
        )));
    }
    if body.embeddings.len() != texts.len() {
        return Err(Error::Contract(format!(
            "{} embeddings for {} texts",
            body.embeddings.len(),
            texts.len()
        )));
    }
    for (i, row) in body.embeddings.iter().enumerate() {
        if row.len() != config.expected_dim {
            return Err(Error::Contract(format!(
                "embedding {i} has {} components, expected {}",
                row.len(),
                config.expected_dim
            )));
        }
    }
    Ok(body.embeddings)
}

/// Embeds `texts` in batches of at most `max_batch`, up to `concurrency`
/// requests at a time. Rows come back in input order.
pub fn embed_remote(texts: &[String], config: &RemoteEndpointConfig) -> Result<EmbeddingMatrix> {
    config.validate()?;
    if texts.is_empty() {
        return Err(Error::Argument("no texts to embed".into()));
    }
    if let Some(i) = texts.iter().position(|t| t.trim().is_empty()) {
        return Err(Error::Argument(format!("text {i} is empty")));
    }
    let agent = config.agent();
    let batches: Vec<&[String]> = texts.chunks(config.max_batch).collect();
    let mut rows = Vec::with_capacity(texts.len());
    for wave in batches.chunks(config.concurrency) {
        let results: Vec<Result<Vec<Vec<f64>>>> = std::thread::scope(|s| {
            let handles: Vec<_> = wave
                .iter()
                .map(|batch| s.spawn(|| embed_batch(&agent, config, batch)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("embed thread panicked"))
                .collect()
        });
        for r in results {
            rows.extend(r?);
        }
    }
    let mut m = Matrix::zeros(rows.len(), config.expected_dim);
    for (i, r) in rows.iter().enumerate() {
        m.row_mut(i).copy_from_slice(r);
    }
    EmbeddingMatrix::new(m).map_err(|e| Error::Contract(e.to_string()))
}
