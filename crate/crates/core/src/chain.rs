//! Classifier chain over the four factors.
//!
//! Embeddings are reduced by PCA once. Head `k` sees the reduced vector
//! followed by one-hot blocks for every earlier factor in chain order (each
//! block spans the factor's classes plus `absent`). Training feeds the gold
//! classes of earlier factors; prediction feeds the chain's own outputs.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::embed::EmbeddingMatrix;
use crate::lda::{fit_lda, LdaConfig, LdaModel};
use crate::linalg::Matrix;
use crate::pca::{fit_pca, transform_pca, PcaModel};
use crate::taxonomy::{Factor, FactorTaxonomy, LabelVector, ABSENT, FACTOR_NAMES};
use crate::{Error, Result};

pub const MODEL_FORMAT: &str = "sfc-model/1";

/// How raw text was turned into the vectors the chain was trained on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EmbedderSpec {
    Hash { dim: usize, seed: u64 },
    WordVectors { path: String, dim: usize },
    Remote { endpoint: String, dim: usize },
}

impl EmbedderSpec {
    pub fn dim(&self) -> usize {
        match self {
            EmbedderSpec::Hash { dim, .. }
            | EmbedderSpec::WordVectors { dim, .. }
            | EmbedderSpec::Remote { dim, .. } => *dim,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainConfig {
    pub factor_order: Vec<String>,
    pub pca_dim: usize,
    pub lda: LdaConfig,
    pub embedder: EmbedderSpec,
}

impl ChainConfig {
    /// Default chain order with the given embedder and PCA size.
    pub fn new(embedder: EmbedderSpec, pca_dim: usize) -> Self {
        ChainConfig {
            factor_order: FACTOR_NAMES.iter().map(|s| s.to_string()).collect(),
            pca_dim,
            lda: LdaConfig::default(),
            embedder,
        }
    }

    pub fn validate(&self, taxonomy: &FactorTaxonomy) -> Result<()> {
        let mut order = self.factor_order.clone();
        order.sort();
        let mut names: Vec<String> = taxonomy.factors().iter().map(|f| f.name.clone()).collect();
        names.sort();
        if order != names {
            return Err(Error::Argument(format!(
                "factor order {:?} is not a permutation of the taxonomy factors",
                self.factor_order
            )));
        }
        if self.pca_dim == 0 {
            return Err(Error::Argument("PCA dimension must be at least 1".into()));
        }
        self.lda.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Predictor {
    Lda(LdaModel),
    /// Used when the training labels for a factor had fewer than two classes.
    Constant {
        class: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Head {
    pub factor: String,
    /// Declared classes plus `absent`; the width of this head's one-hot block.
    pub classes: Vec<String>,
    pub input_dim: usize,
    pub predictor: Predictor,
}

impl Head {
    pub fn lda(&self) -> Option<&LdaModel> {
        match &self.predictor {
            Predictor::Lda(m) => Some(m),
            Predictor::Constant { .. } => None,
        }
    }

    fn predict_index(&self, features: &[f64]) -> Result<usize> {
        let class = match &self.predictor {
            Predictor::Lda(m) => m.classes[m.decide(features)?].as_str(),
            Predictor::Constant { class } => class.as_str(),
        };
        self.classes.iter().position(|c| c == class).ok_or_else(|| {
            Error::Validation(format!(
                "head `{}` predicts unknown class `{class}`",
                self.factor
            ))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainModel {
    pub format: String,
    pub taxonomy: FactorTaxonomy,
    pub config: ChainConfig,
    /// Which rows the PCA was fitted on. Always the training split.
    pub pca_fitted_on: String,
    pub pca: PcaModel,
    /// One head per factor, in chain order.
    pub heads: Vec<Head>,
}

impl ChainModel {
    /// Structural checks for a deserialized model: format tag, head order
    /// and the input-dimension formula of every head.
    pub fn validate(&self) -> Result<()> {
        if self.format != MODEL_FORMAT {
            return Err(Error::Validation(format!(
                "unsupported model format `{}`, expected `{MODEL_FORMAT}`",
                self.format
            )));
        }
        self.taxonomy.validate()?;
        self.config.validate(&self.taxonomy)?;
        if self.heads.len() != self.taxonomy.factors().len() {
            return Err(Error::Validation(format!(
                "model has {} heads for {} factors",
                self.heads.len(),
                self.taxonomy.factors().len()
            )));
        }
        if self.pca.input_dim != self.config.embedder.dim() {
            return Err(Error::Validation(
                "PCA input does not match the embedder dimension".into(),
            ));
        }
        let mut expected = self.pca.output_dim;
        for (head, name) in self.heads.iter().zip(&self.config.factor_order) {
            let factor = self.factor(name)?;
            if head.factor != *name || head.classes != factor.all_classes() {
                return Err(Error::Validation(format!(
                    "head for `{name}` does not match the taxonomy"
                )));
            }
            if head.input_dim != expected {
                return Err(Error::Validation(format!(
                    "head `{name}` takes {} features, expected {expected}",
                    head.input_dim
                )));
            }
            if let Some(m) = head.lda() {
                if m.input_dim != expected || m.classes.iter().any(|c| !head.classes.contains(c)) {
                    return Err(Error::Validation(format!(
                        "discriminant for `{name}` is inconsistent"
                    )));
                }
            }
            expected += factor.width();
        }
        Ok(())
    }

    fn factor(&self, name: &str) -> Result<&Factor> {
        self.taxonomy
            .factor(name)
            .ok_or_else(|| Error::Validation(format!("unknown factor `{name}`")))
    }

    pub fn head(&self, factor: &str) -> Option<&Head> {
        self.heads.iter().find(|h| h.factor == factor)
    }

    /// Input rows for the head of `factor`, built from gold labels of the
    /// earlier factors as during training.
    pub fn head_features(
        &self,
        x: &EmbeddingMatrix,
        labels: &[LabelVector],
        factor: &str,
    ) -> Result<EmbeddingMatrix> {
        if labels.len() != x.rows() {
            return Err(Error::Dimension {
                expected: x.rows(),
                found: labels.len(),
            });
        }
        let pos = self
            .config
            .factor_order
            .iter()
            .position(|f| f == factor)
            .ok_or_else(|| Error::Argument(format!("unknown factor `{factor}`")))?;
        let reduced = transform_pca(&self.pca, x)?;
        let earlier = self.config.factor_order[..pos]
            .iter()
            .map(|n| self.factor(n))
            .collect::<Result<Vec<_>>>()?;
        teacher_forced(&reduced, labels, &earlier)
    }
}

fn one_hot(out: &mut Vec<f64>, width: usize, index: usize) {
    let start = out.len();
    out.resize(start + width, 0.0);
    out[start + index] = 1.0;
}

fn teacher_forced(
    reduced: &EmbeddingMatrix,
    labels: &[LabelVector],
    earlier: &[&Factor],
) -> Result<EmbeddingMatrix> {
    let width = reduced.dim() + earlier.iter().map(|f| f.width()).sum::<usize>();
    let mut m = Matrix::zeros(reduced.rows(), width);
    let mut row = Vec::with_capacity(width);
    for (i, lv) in labels.iter().enumerate() {
        row.clear();
        row.extend_from_slice(reduced.row(i));
        for f in earlier {
            let class = lv.get(&f.name).unwrap_or(ABSENT);
            let idx = f.class_index(class).ok_or_else(|| {
                Error::Validation(format!("unknown class `{class}` for `{}`", f.name))
            })?;
            one_hot(&mut row, f.width(), idx);
        }
        m.row_mut(i).copy_from_slice(&row);
    }
    EmbeddingMatrix::new(m)
}

/// Trains PCA and one discriminant head per factor.
pub fn fit_chain(
    x: &EmbeddingMatrix,
    labels: &[LabelVector],
    taxonomy: &FactorTaxonomy,
    config: &ChainConfig,
) -> Result<ChainModel> {
    config.validate(taxonomy)?;
    if labels.len() != x.rows() {
        return Err(Error::Argument(format!(
            "{} label vectors for {} embeddings",
            labels.len(),
            x.rows()
        )));
    }
    if x.rows() < 4 {
        return Err(Error::Argument(format!(
            "need at least 4 training samples, got {}",
            x.rows()
        )));
    }
    if x.dim() != config.embedder.dim() {
        return Err(Error::Dimension {
            expected: config.embedder.dim(),
            found: x.dim(),
        });
    }
    let labels = labels
        .iter()
        .map(|l| taxonomy.check(l))
        .collect::<Result<Vec<_>>>()?;

    let pca = fit_pca(x, config.pca_dim)?;
    let reduced = transform_pca(&pca, x)?;

    let mut heads = Vec::with_capacity(config.factor_order.len());
    let mut earlier: Vec<&Factor> = Vec::new();
    for name in &config.factor_order {
        let factor = taxonomy
            .factor(name)
            .ok_or_else(|| Error::Argument(format!("unknown factor `{name}`")))?;
        let features =
            teacher_forced(&reduced, &labels, &earlier).map_err(|e| e.in_factor(name))?;
        let y: Vec<&str> = labels
            .iter()
            .map(|l| l.get(name).unwrap_or(ABSENT))
            .collect();
        let classes = factor.all_classes();

        let mut counts = vec![0usize; classes.len()];
        for c in &y {
            if let Some(k) = factor.class_index(c) {
                counts[k] += 1;
            }
        }
        let predictor = if counts.iter().filter(|&&n| n > 0).count() < 2 {
            Predictor::Constant {
                class: majority(factor, &counts).to_string(),
            }
        } else {
            Predictor::Lda(
                fit_lda(&features, &y, &classes, &config.lda).map_err(|e| e.in_factor(name))?,
            )
        };
        heads.push(Head {
            factor: name.clone(),
            classes,
            input_dim: features.dim(),
            predictor,
        });
        earlier.push(factor);
    }

    Ok(ChainModel {
        format: MODEL_FORMAT.to_string(),
        taxonomy: taxonomy.clone(),
        config: config.clone(),
        pca_fitted_on: "train".to_string(),
        pca,
        heads,
    })
}

// Most frequent class; ties prefer `absent`, then the lower class index.
fn majority<'f>(factor: &'f Factor, counts: &[usize]) -> &'f str {
    let absent = factor.classes.len();
    let mut best = absent;
    for (k, &n) in counts.iter().enumerate() {
        if n > counts[best] {
            best = k;
        }
    }
    factor.class_name(best)
}

/// Runs the chain on one raw embedding.
pub fn predict_chain(model: &ChainModel, x: &[f64]) -> Result<LabelVector> {
    let mut features = model.pca.transform_row(x)?;
    let mut labels = model.taxonomy.all_absent();
    for head in &model.heads {
        if features.len() != head.input_dim {
            return Err(Error::Validation(format!(
                "head `{}` expects {} features, chain built {}",
                head.factor,
                head.input_dim,
                features.len()
            )));
        }
        let k = head
            .predict_index(&features)
            .map_err(|e| e.in_factor(&head.factor))?;
        labels.set(&head.factor, &head.classes[k]);
        one_hot(&mut features, head.classes.len(), k);
    }
    Ok(labels)
}
