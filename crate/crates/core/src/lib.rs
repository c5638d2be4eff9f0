//! Symptom factor classification core.
//!
//! Predicts the duration, frequency, severity and onset of a patient
//! complaint from sentence embeddings. The pipeline reduces embeddings with
//! PCA and feeds them through an ordered chain of Fisher discriminant heads,
//! one per factor. Keyword-based weak labeling, a deterministic synthetic
//! corpus, a feature-hash embedder and micro-averaged metrics round it out.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the remote
//! embedding client and the command line live in the `sfc` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod chain;
pub mod corpus;
pub mod embed;
mod error;
pub mod lda;
pub mod linalg;
pub mod metrics;
pub mod pca;
pub mod projection;
pub mod rng;
pub mod taxonomy;
pub mod text;
pub mod weaklabel;

pub use chain::{fit_chain, predict_chain, ChainConfig, ChainModel, EmbedderSpec, Head};
pub use corpus::{
    generate_synthetic, split_train_test, validate_dataset, LabeledUtterance, SyntheticSpec,
};
pub use embed::{embed_average, embed_hash, EmbeddingMatrix, WordVectorTable};
pub use error::{Error, Result};
pub use lda::{classify, compute_scatter, fit_lda, project, LdaConfig, LdaModel, ScatterPair};
pub use linalg::Matrix;
pub use metrics::{evaluate, ConfusionCounts, EvalReport, FactorReport};
pub use pca::{fit_pca, transform_pca, PcaModel};
pub use projection::{export_projection, ProjectionRow};
pub use taxonomy::{Factor, FactorTaxonomy, LabelVector, ABSENT};
pub use weaklabel::{apply_lexicon, extract_duration, DurationPattern, Lexicon, LexiconEntry};
