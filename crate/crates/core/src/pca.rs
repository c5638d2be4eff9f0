//! Principal component analysis for reducing sentence vectors.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::embed::EmbeddingMatrix;
use crate::linalg::{canonical_sign, dot, norm, symmetric_eigen, Matrix};
use crate::{Error, Result};

/// Relative variance below which a component counts as numerically absent.
pub const RANK_TOLERANCE: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaModel {
    pub input_dim: usize,
    pub output_dim: usize,
    pub mean: Vec<f64>,
    /// `output_dim × input_dim`, rows are orthonormal principal directions.
    pub components: Matrix,
    /// Sample variance along each component, descending.
    pub explained_variance: Vec<f64>,
    /// Set when the centered data has fewer than `output_dim` directions
    /// with variance above [`RANK_TOLERANCE`] relative to the first.
    pub rank_deficient: bool,
}

/// Fits `d` components to `x`.
///
/// Works from the `D × D` sample covariance when `D ≤ N` and from the
/// `N × N` Gram matrix of the centered rows otherwise; either way the rows
/// of `components` are the top right singular vectors of the centered data
/// and `explained_variance[k] = σ_k² / (N − 1)`. Each component is signed so
/// its largest-magnitude entry is positive.
pub fn fit_pca(x: &EmbeddingMatrix, d: usize) -> Result<PcaModel> {
    let n = x.rows();
    let dim = x.dim();
    if n < 2 {
        return Err(Error::Argument(format!(
            "PCA needs at least 2 samples, got {n}"
        )));
    }
    let max_d = dim.min(n - 1);
    if d == 0 || d > max_d {
        return Err(Error::Argument(format!(
            "PCA dimension must be in 1..={max_d} for {n} samples of dimension {dim}, got {d}"
        )));
    }

    let mut mean = vec![0.0; dim];
    for i in 0..n {
        for (m, v) in mean.iter_mut().zip(x.row(i)) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m /= n as f64;
    }
    let mut centered = x.matrix().clone();
    for i in 0..n {
        for (c, m) in centered.row_mut(i).iter_mut().zip(&mean) {
            *c -= m;
        }
    }

    let denom = (n - 1) as f64;
    let (mut components, mut variance) = if dim <= n {
        let cov = gram_lower(&centered.transpose());
        let eig = symmetric_eigen(&cov)?;
        let mut comps = Matrix::zeros(d, dim);
        for k in 0..d {
            for j in 0..dim {
                comps[(k, j)] = eig.vectors[(j, k)];
            }
        }
        let var = eig.values[..d]
            .iter()
            .map(|v| v / denom)
            .collect::<Vec<_>>();
        (comps, var)
    } else {
        let gram = gram_lower(&centered);
        let eig = symmetric_eigen(&gram)?;
        let top = eig.values[0].max(0.0);
        let mut comps = Matrix::zeros(d, dim);
        for k in 0..d {
            let mu = eig.values[k];
            if mu > top * f64::EPSILON * n as f64 && mu > 0.0 {
                let u = eig.vectors.column(k);
                let v = centered.tr_matvec(&u)?;
                let s = libm::sqrt(mu);
                for (c, vj) in comps.row_mut(k).iter_mut().zip(v) {
                    *c = vj / s;
                }
            }
        }
        let var = eig.values[..d]
            .iter()
            .map(|v| v / denom)
            .collect::<Vec<_>>();
        (comps, var)
    };

    orthonormalize_rows(&mut components);
    for k in 0..d {
        canonical_sign(components.row_mut(k));
    }
    for v in &mut variance {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    let top = variance[0];
    let rank_deficient = top == 0.0 || variance.iter().any(|v| *v <= RANK_TOLERANCE * top);

    Ok(PcaModel {
        input_dim: dim,
        output_dim: d,
        mean,
        components,
        explained_variance: variance,
        rank_deficient,
    })
}

// `A Aᵀ` for a row-major `A`, computing the lower triangle and mirroring.
fn gram_lower(a: &Matrix) -> Matrix {
    let n = a.rows();
    let mut g = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let v = dot(a.row(i), a.row(j));
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    g
}

// Modified Gram-Schmidt, run twice. Rows that collapse are replaced by the
// first standard basis vector that survives orthogonalization.
fn orthonormalize_rows(m: &mut Matrix) {
    let (rows, cols) = (m.rows(), m.cols());
    for k in 0..rows {
        let mut candidate = m.row(k).to_vec();
        let mut basis = 0;
        loop {
            let before = norm(&candidate);
            for _ in 0..2 {
                for j in 0..k {
                    let p = dot(&candidate, m.row(j));
                    for (c, q) in candidate.iter_mut().zip(m.row(j)) {
                        *c -= p * q;
                    }
                }
            }
            let after = norm(&candidate);
            if before > 0.0 && after > 0.5 * before && after > 1e-300 {
                for c in &mut candidate {
                    *c /= after;
                }
                break;
            }
            candidate = vec![0.0; cols];
            candidate[basis % cols] = 1.0;
            basis += 1;
        }
        m.row_mut(k).copy_from_slice(&candidate);
    }
}

impl PcaModel {
    pub fn transform_row(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.input_dim {
            return Err(Error::Dimension {
                expected: self.input_dim,
                found: x.len(),
            });
        }
        let centered: Vec<f64> = x.iter().zip(&self.mean).map(|(a, m)| a - m).collect();
        self.components.matvec(&centered)
    }

    /// Maps reduced coordinates back to the input space.
    pub fn inverse_row(&self, z: &[f64]) -> Result<Vec<f64>> {
        let mut x = self.components.tr_matvec(z)?;
        for (a, m) in x.iter_mut().zip(&self.mean) {
            *a += m;
        }
        Ok(x)
    }
}

/// Centers `x` by the model mean and projects onto the components.
pub fn transform_pca(model: &PcaModel, x: &EmbeddingMatrix) -> Result<EmbeddingMatrix> {
    if x.dim() != model.input_dim {
        return Err(Error::Dimension {
            expected: model.input_dim,
            found: x.dim(),
        });
    }
    let mut out = Matrix::zeros(x.rows(), model.output_dim);
    for i in 0..x.rows() {
        let z = model.transform_row(x.row(i))?;
        out.row_mut(i).copy_from_slice(&z);
    }
    EmbeddingMatrix::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line() -> EmbeddingMatrix {
        EmbeddingMatrix::from_rows(2, &[[1.0, 0.0], [2.0, 0.0], [3.0, 0.0]]).unwrap()
    }

    #[test]
    fn points_on_an_axis() {
        let m = fit_pca(&line(), 2).unwrap();
        assert_eq!(m.components.row(0), [1.0, 0.0]);
        assert!((m.explained_variance[0] - 1.0).abs() < 1e-15);
        assert_eq!(m.explained_variance[1], 0.0);
        assert!(m.rank_deficient);
    }

    #[test]
    fn projections_on_the_axis() {
        let m = fit_pca(&line(), 1).unwrap();
        let z = transform_pca(&m, &line()).unwrap();
        assert_eq!(z.matrix().column(0), [-1.0, 0.0, 1.0]);
        assert_eq!(m.transform_row(&m.mean).unwrap(), [0.0]);
        assert!(!m.rank_deficient);
    }

    #[test]
    fn dimension_checks() {
        let m = fit_pca(&line(), 1).unwrap();
        let wrong = EmbeddingMatrix::from_rows(3, &[[1.0, 2.0, 3.0]]).unwrap();
        assert!(matches!(
            transform_pca(&m, &wrong),
            Err(Error::Dimension { .. })
        ));
        assert!(fit_pca(&line(), 0).is_err());
        assert!(fit_pca(&line(), 3).is_err());
        let single = EmbeddingMatrix::from_rows(2, &[[1.0, 2.0]]).unwrap();
        assert!(fit_pca(&single, 1).is_err());
    }

    #[test]
    fn wide_data_uses_gram_route() {
        // 3 samples in 5 dimensions: only 2 directions carry variance.
        let x = EmbeddingMatrix::from_rows(
            5,
            &[
                [1.0, 0.0, 2.0, 0.0, 0.0],
                [0.0, 1.0, 0.0, 0.0, 3.0],
                [1.0, 1.0, 1.0, 1.0, 1.0],
            ],
        )
        .unwrap();
        let m = fit_pca(&x, 2).unwrap();
        let g = m.components.matmul(&m.components.transpose()).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g[(i, j)] - want).abs() < 1e-12);
            }
        }
        // Full rank here, so reconstruction is exact.
        for i in 0..3 {
            let back = m.inverse_row(&m.transform_row(x.row(i)).unwrap()).unwrap();
            for (a, b) in back.iter().zip(x.row(i)) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn constant_data_fills_components() {
        let x = EmbeddingMatrix::from_rows(3, &[[1.0, 1.0, 1.0]; 4]).unwrap();
        let m = fit_pca(&x, 3).unwrap();
        assert!(m.rank_deficient);
        assert!(m.explained_variance.iter().all(|v| *v == 0.0));
        let g = m.components.matmul(&m.components.transpose()).unwrap();
        assert!((g.trace() - 3.0).abs() < 1e-12);
    }
}
