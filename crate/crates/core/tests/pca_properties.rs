mod oracle;

use nalgebra::DMatrix;
use oracle::{covariance, dense, embedding, pca_instance, symmetric_eigen_desc};
use proptest::prelude::*;
use sfc_core::{fit_pca, transform_pca, EmbeddingMatrix};

fn max_d(x: &[Vec<f64>]) -> usize {
    x[0].len().min(x.len() - 1)
}

fn reconstruction_error(x: &[Vec<f64>], d: usize) -> f64 {
    let m = fit_pca(&embedding(x), d).unwrap();
    x.iter()
        .map(|r| {
            let back = m.inverse_row(&m.transform_row(r).unwrap()).unwrap();
            back.iter()
                .zip(r)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
        })
        .sum::<f64>()
        .sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn components_are_orthonormal(seed in any::<u64>()) {
        let x = pca_instance(seed);
        let m = fit_pca(&embedding(&x), max_d(&x)).unwrap();
        let c = dense(&m.components);
        let g = &c * c.transpose();
        prop_assert!((g - DMatrix::identity(m.output_dim, m.output_dim)).amax() <= 1e-10);
        prop_assert!(m.explained_variance.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(m.explained_variance.iter().all(|v| *v >= 0.0));
    }

    #[test]
    fn variance_is_fully_accounted(seed in any::<u64>()) {
        let x = pca_instance(seed);
        let m = fit_pca(&embedding(&x), max_d(&x)).unwrap();
        let total = covariance(&x).trace();
        let sum: f64 = m.explained_variance.iter().sum();
        prop_assert!((sum - total).abs() <= 1e-8 * total.max(f64::MIN_POSITIVE), "{} vs {}", sum, total);
    }

    #[test]
    fn matches_covariance_eigendecomposition(seed in any::<u64>()) {
        let x = pca_instance(seed);
        let d = max_d(&x);
        let m = fit_pca(&embedding(&x), d).unwrap();
        let (values, vectors) = symmetric_eigen_desc(covariance(&x));
        let top = values[0].max(f64::MIN_POSITIVE);
        for k in 0..d {
            prop_assert!((m.explained_variance[k] - values[k].max(0.0)).abs() <= 1e-8 * top);
            // Directions are only defined when the eigenvalue is isolated.
            let gap = (0..values.len())
                .filter(|&j| j != k)
                .map(|j| (values[j] - values[k]).abs())
                .fold(f64::INFINITY, f64::min);
            if gap > 1e-6 * top && values[k] > 1e-6 * top {
                let got = m.components.row(k);
                let dot: f64 = got.iter().zip(vectors.column(k).iter()).map(|(a, b)| a * b).sum();
                prop_assert!((dot.abs() - 1.0).abs() <= 1e-8, "component {} overlap {}", k, dot);
            }
        }
    }

    #[test]
    fn reconstruction_error_shrinks_with_more_components(seed in any::<u64>()) {
        let x = pca_instance(seed);
        let errs: Vec<f64> = (1..=max_d(&x)).map(|d| reconstruction_error(&x, d)).collect();
        for w in errs.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-9 * (1.0 + w[0]));
        }
    }

    #[test]
    fn full_rank_reconstruction_is_exact(seed in any::<u64>()) {
        let x = pca_instance(seed);
        if x.len() > x[0].len() {
            let norm = x.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
            prop_assert!(reconstruction_error(&x, x[0].len()) <= 1e-8 * norm);
        }
    }

    #[test]
    fn fit_is_deterministic(seed in any::<u64>()) {
        let x = pca_instance(seed);
        prop_assert_eq!(fit_pca(&embedding(&x), 1).unwrap(), fit_pca(&embedding(&x), 1).unwrap());
    }
}

#[test]
fn twenty_by_six_against_covariance() {
    let mut rng = sfc_core::rng::SeededRng::new(2024);
    let x: Vec<Vec<f64>> = (0..20)
        .map(|_| {
            (0..6)
                .map(|j| (j + 1) as f64 * (rng.unit() - 0.5))
                .collect()
        })
        .collect();
    let m = fit_pca(&embedding(&x), 3).unwrap();
    let (values, vectors) = symmetric_eigen_desc(covariance(&x));
    for k in 0..3 {
        assert!((m.explained_variance[k] - values[k]).abs() <= 1e-8 * values[0]);
        let v: Vec<f64> = vectors.column(k).iter().copied().collect();
        let sign = if m
            .components
            .row(k)
            .iter()
            .zip(&v)
            .map(|(a, b)| a * b)
            .sum::<f64>()
            < 0.0
        {
            -1.0
        } else {
            1.0
        };
        for (a, b) in m.components.row(k).iter().zip(&v) {
            assert!((a - sign * b).abs() <= 1e-8);
        }
    }
}

#[test]
fn rank_deficient_data_is_flagged() {
    // Points on a line in 3-D.
    let x: Vec<Vec<f64>> = (0..6)
        .map(|i| vec![i as f64, 2.0 * i as f64, -(i as f64)])
        .collect();
    let m = fit_pca(&embedding(&x), 3).unwrap();
    assert!(m.rank_deficient);
    assert!(m.explained_variance[1] <= 1e-10 * m.explained_variance[0]);
    let z = transform_pca(&m, &EmbeddingMatrix::from_rows(3, &x).unwrap()).unwrap();
    assert_eq!(z.dim(), 3);
}
