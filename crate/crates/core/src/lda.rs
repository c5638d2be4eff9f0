//! Fisher linear discriminant analysis.
//!
//! Between- and within-class scatter are built exactly as
//!
//! ```text
//! Hb = Σ_i (m_i − m)(m_i − m)ᵀ            (unweighted over classes)
//! Hw = Σ_i Σ_{h ∈ class i} (h − m_i)(h − m_i)ᵀ
//! ```
//!
//! with `m` the mean of all samples. The discriminant directions solve
//! `Hb w = λ Hw' w` where `Hw' = Hw + γ · (tr(Hw) / D) · I`. The problem is
//! reduced to a symmetric one by whitening with the eigendecomposition of
//! `Hw'`, so the spectrum is real and the solve is backward stable.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::embed::EmbeddingMatrix;
use crate::linalg::{canonical_sign, dot, norm, symmetric_eigen, Matrix};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LdaConfig {
    /// Trace-proportional ridge added to the within-class scatter.
    pub shrinkage: f64,
    /// `Hw'` counts as singular when its smallest eigenvalue is at most
    /// `tolerance` times its largest.
    pub tolerance: f64,
    pub max_components: Option<usize>,
    /// Weight each class term of `Hb` by its sample count.
    #[serde(default)]
    pub weighted_between: bool,
}

impl Default for LdaConfig {
    fn default() -> Self {
        LdaConfig {
            shrinkage: 1e-4,
            tolerance: 1e-7,
            max_components: None,
            weighted_between: false,
        }
    }
}

impl LdaConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.shrinkage >= 0.0 && self.shrinkage.is_finite()) {
            return Err(Error::Argument(format!(
                "shrinkage must be >= 0, got {}",
                self.shrinkage
            )));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::Argument(format!(
                "tolerance must be > 0, got {}",
                self.tolerance
            )));
        }
        if self.max_components == Some(0) {
            return Err(Error::Argument("max components must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScatterPair {
    pub between: Matrix,
    pub within: Matrix,
    /// One row per class that has samples, in class-list order.
    pub class_means: Matrix,
    pub global_mean: Vec<f64>,
    pub class_counts: Vec<usize>,
    pub classes: Vec<String>,
}

/// Builds the scatter matrices. Classes from `classes` without samples are
/// left out; at least two must remain.
pub fn compute_scatter<S: AsRef<str>>(
    x: &EmbeddingMatrix,
    y: &[S],
    classes: &[String],
) -> Result<ScatterPair> {
    scatter(x, y, classes, false)
}

fn scatter<S: AsRef<str>>(
    x: &EmbeddingMatrix,
    y: &[S],
    classes: &[String],
    weighted: bool,
) -> Result<ScatterPair> {
    let n = x.rows();
    let dim = x.dim();
    if y.len() != n {
        return Err(Error::Dimension {
            expected: n,
            found: y.len(),
        });
    }
    if n < 2 {
        return Err(Error::Argument(format!("need at least 2 samples, got {n}")));
    }
    let mut idx = Vec::with_capacity(n);
    for label in y {
        let label = label.as_ref();
        let k = classes
            .iter()
            .position(|c| c == label)
            .ok_or_else(|| Error::Argument(format!("label `{label}` is not in the class list")))?;
        idx.push(k);
    }

    let mut counts = vec![0usize; classes.len()];
    let mut sums = Matrix::zeros(classes.len(), dim);
    let mut global_mean = vec![0.0; dim];
    for (i, &k) in idx.iter().enumerate() {
        counts[k] += 1;
        for (s, v) in sums.row_mut(k).iter_mut().zip(x.row(i)) {
            *s += v;
        }
        for (g, v) in global_mean.iter_mut().zip(x.row(i)) {
            *g += v;
        }
    }
    for g in &mut global_mean {
        *g /= n as f64;
    }

    let present: Vec<usize> = (0..classes.len()).filter(|&k| counts[k] > 0).collect();
    if present.len() < 2 {
        return Err(Error::DegenerateClasses(format!(
            "need at least 2 distinct classes, found {}",
            present.len()
        )));
    }
    // Row of each class in the compacted mean matrix.
    let mut slot = vec![usize::MAX; classes.len()];
    let mut class_means = Matrix::zeros(present.len(), dim);
    for (r, &k) in present.iter().enumerate() {
        slot[k] = r;
        let c = counts[k] as f64;
        for (m, s) in class_means.row_mut(r).iter_mut().zip(sums.row(k)) {
            *m = s / c;
        }
    }

    let mut between = Matrix::zeros(dim, dim);
    for (r, &k) in present.iter().enumerate() {
        let w = if weighted { counts[k] as f64 } else { 1.0 };
        let diff: Vec<f64> = class_means
            .row(r)
            .iter()
            .zip(&global_mean)
            .map(|(a, b)| a - b)
            .collect();
        add_outer(&mut between, &diff, w);
    }
    let mut within = Matrix::zeros(dim, dim);
    for (i, &k) in idx.iter().enumerate() {
        let diff: Vec<f64> = x
            .row(i)
            .iter()
            .zip(class_means.row(slot[k]))
            .map(|(a, b)| a - b)
            .collect();
        add_outer(&mut within, &diff, 1.0);
    }
    mirror_lower(&mut between);
    mirror_lower(&mut within);

    Ok(ScatterPair {
        between,
        within,
        class_means,
        global_mean,
        class_counts: present.iter().map(|&k| counts[k]).collect(),
        classes: present.iter().map(|&k| classes[k].clone()).collect(),
    })
}

// Lower triangle of `m += w · v vᵀ`.
fn add_outer(m: &mut Matrix, v: &[f64], w: f64) {
    for i in 0..v.len() {
        let vi = w * v[i];
        if vi == 0.0 {
            continue;
        }
        let row = m.row_mut(i);
        for j in 0..=i {
            row[j] += vi * v[j];
        }
    }
}

fn mirror_lower(m: &mut Matrix) {
    for i in 0..m.rows() {
        for j in 0..i {
            m[(j, i)] = m[(i, j)];
        }
    }
}

impl ScatterPair {
    /// `Hw + γ · (tr(Hw)/D) · I`.
    pub fn regularized_within(&self, shrinkage: f64) -> Matrix {
        let mut w = self.within.clone();
        let dim = w.rows();
        let ridge = shrinkage * w.trace() / dim as f64;
        for i in 0..dim {
            w[(i, i)] += ridge;
        }
        w
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdaModel {
    pub input_dim: usize,
    /// `D × d'`, unit-norm columns.
    pub directions: Matrix,
    /// Generalized eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
    /// `C × d'`: each class mean projected onto the directions.
    pub projected_means: Matrix,
    pub classes: Vec<String>,
    /// Fisher criterion `wᵀHb w / wᵀHw' w` per direction, evaluated directly
    /// from the scatter matrices.
    pub fisher_ratios: Vec<f64>,
    pub config: LdaConfig,
}

/// Fits discriminant directions to labeled rows.
pub fn fit_lda<S: AsRef<str>>(
    x: &EmbeddingMatrix,
    y: &[S],
    classes: &[String],
    config: &LdaConfig,
) -> Result<LdaModel> {
    config.validate()?;
    let sp = scatter(x, y, classes, config.weighted_between)?;
    fit_from_scatter(&sp, config)
}

/// Solves the generalized eigenproblem for an existing scatter pair.
pub fn fit_from_scatter(sp: &ScatterPair, config: &LdaConfig) -> Result<LdaModel> {
    config.validate()?;
    let dim = sp.within.rows();
    let c = sp.classes.len();
    let within = sp.regularized_within(config.shrinkage);

    let weig = symmetric_eigen(&within)?;
    let max = weig.values[0];
    let min = weig.values[dim - 1];
    if max.is_nan() || max <= 0.0 || min <= config.tolerance * max {
        return Err(Error::Conditioning { min, max });
    }

    // Whitening transform P = U Λ^{-1/2}, so Pᵀ Hw' P = I.
    let mut whiten = weig.vectors.clone();
    for k in 0..dim {
        let s = 1.0 / libm::sqrt(weig.values[k]);
        for i in 0..dim {
            whiten[(i, k)] *= s;
        }
    }
    let mut reduced = whiten.transpose().matmul(&sp.between)?.matmul(&whiten)?;
    reduced.symmetrize();
    let beig = symmetric_eigen(&reduced)?;

    let keep = (c - 1)
        .min(dim)
        .min(config.max_components.unwrap_or(usize::MAX));
    let mut directions = Matrix::zeros(dim, keep);
    for k in 0..keep {
        let v = beig.vectors.column(k);
        let mut w = whiten.matvec(&v)?;
        let len = norm(&w);
        for x in &mut w {
            *x /= len;
        }
        canonical_sign(&mut w);
        for i in 0..dim {
            directions[(i, k)] = w[i];
        }
    }

    let fisher_ratios = (0..keep)
        .map(|k| {
            let w = directions.column(k);
            let num = dot(&w, &sp.between.matvec(&w)?);
            let den = dot(&w, &within.matvec(&w)?);
            Ok(num / den)
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(LdaModel {
        input_dim: dim,
        projected_means: sp.class_means.matmul(&directions)?,
        directions,
        eigenvalues: beig.values[..keep].to_vec(),
        classes: sp.classes.clone(),
        fisher_ratios,
        config: *config,
    })
}

impl LdaModel {
    pub fn components(&self) -> usize {
        self.directions.cols()
    }

    pub fn project_row(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.input_dim {
            return Err(Error::Dimension {
                expected: self.input_dim,
                found: x.len(),
            });
        }
        self.directions.tr_matvec(x)
    }

    /// Index into `classes` of the nearest projected mean. Ties go to the
    /// lower index.
    pub fn decide(&self, x: &[f64]) -> Result<usize> {
        if !x.iter().all(|v| v.is_finite()) {
            return Err(Error::Argument("input has non-finite components".into()));
        }
        let z = self.project_row(x)?;
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for k in 0..self.classes.len() {
            let d: f64 = self
                .projected_means
                .row(k)
                .iter()
                .zip(&z)
                .map(|(m, v)| (m - v) * (m - v))
                .sum();
            if d < best_d {
                best = k;
                best_d = d;
            }
        }
        Ok(best)
    }
}

/// `X · W`, no centering.
pub fn project(model: &LdaModel, x: &EmbeddingMatrix) -> Result<EmbeddingMatrix> {
    if x.dim() != model.input_dim {
        return Err(Error::Dimension {
            expected: model.input_dim,
            found: x.dim(),
        });
    }
    EmbeddingMatrix::new(x.matrix().matmul(&model.directions)?)
}

/// Nearest projected class mean under Euclidean distance.
pub fn classify<'m>(model: &'m LdaModel, x: &[f64]) -> Result<&'m str> {
    Ok(&model.classes[model.decide(x)?])
}
