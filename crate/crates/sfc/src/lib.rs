//! File formats, embedders and the `sfc` command line on top of `sfc-core`.
//!
//! * [`dataset`]: JSONL utterance files, taxonomy and lexicon files.
//! * [`wordvec`]: word2vec-style text and binary word-vector files.
//! * [`remote`]: client for the contextual-embedding HTTP service.
//! * [`embedder`]: turns an [`sfc_core::EmbedderSpec`] into sentence vectors.
//! * [`model`]: the JSON model file.

pub mod cli;
pub mod dataset;
pub mod embedder;
mod error;
pub mod model;
pub mod remote;
pub mod wordvec;

pub use error::{Error, Result};
