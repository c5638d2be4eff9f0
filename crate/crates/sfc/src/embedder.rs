//! Resolves an [`EmbedderSpec`] into something that embeds text.

use std::path::Path;

use sfc_core::{
    embed_average, embed_hash, EmbedderSpec, EmbeddingMatrix, Error as CoreError, Matrix,
    WordVectorTable,
};

use crate::remote::{embed_remote, RemoteEndpointConfig};
use crate::wordvec::{parse_word_vectors, Format};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub enum Embedder {
    Hash { dim: usize, seed: u64 },
    WordVectors(WordVectorTable),
    Remote(RemoteEndpointConfig),
}

pub fn load_word_vectors(path: &Path) -> Result<WordVectorTable> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_word_vectors(std::io::BufReader::new(file), Format::from_path(path))
}

impl Embedder {
    /// Loads whatever the spec points at. `endpoint` replaces the URL of a
    /// remote spec when given.
    pub fn from_spec(spec: &EmbedderSpec, endpoint: Option<&str>) -> Result<Self> {
        match spec {
            EmbedderSpec::Hash { dim, seed } => {
                if *dim < 2 {
                    return Err(Error::Argument(format!(
                        "hash dimension must be at least 2, got {dim}"
                    )));
                }
                Ok(Embedder::Hash {
                    dim: *dim,
                    seed: *seed,
                })
            }
            EmbedderSpec::WordVectors { path, dim } => {
                let table = load_word_vectors(Path::new(path))?;
                if table.dim() != *dim {
                    return Err(CoreError::Dimension {
                        expected: *dim,
                        found: table.dim(),
                    }
                    .into());
                }
                Ok(Embedder::WordVectors(table))
            }
            EmbedderSpec::Remote { endpoint: url, dim } => {
                let mut cfg = RemoteEndpointConfig::new(endpoint.unwrap_or(url));
                cfg.expected_dim = *dim;
                cfg.validate()?;
                Ok(Embedder::Remote(cfg))
            }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Embedder::Hash { dim, .. } => *dim,
            Embedder::WordVectors(t) => t.dim(),
            Embedder::Remote(cfg) => cfg.expected_dim,
        }
    }

    /// Embeds `(id, text)` pairs into rows in the same order. Ids only
    /// appear in error messages.
    pub fn embed<I: AsRef<str>, T: AsRef<str>>(&self, items: &[(I, T)]) -> Result<EmbeddingMatrix> {
        if let Embedder::Remote(cfg) = self {
            let texts: Vec<String> = items.iter().map(|(_, t)| t.as_ref().to_string()).collect();
            return embed_remote(&texts, cfg);
        }
        let mut m = Matrix::zeros(items.len(), self.dim());
        for (i, (id, text)) in items.iter().enumerate() {
            let v = match self {
                Embedder::Hash { dim, seed } => embed_hash(text.as_ref(), *dim, *seed),
                Embedder::WordVectors(t) => embed_average(text.as_ref(), t),
                Embedder::Remote(_) => unreachable!(),
            }
            .map_err(|e| match e {
                CoreError::Coverage(_) => CoreError::Coverage(id.as_ref().to_string()),
                e => CoreError::Validation(format!("record `{}`: {e}", id.as_ref())),
            })?;
            m.row_mut(i).copy_from_slice(&v);
        }
        Ok(EmbeddingMatrix::new(m)?)
    }
}
