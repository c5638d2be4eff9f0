//! Dense reference implementations built on nalgebra, plus random instance
//! generators. Shared by the property tests and the acceptance suite.
#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};
use sfc_core::rng::SeededRng;
use sfc_core::{EmbeddingMatrix, Matrix};

pub fn dense(m: &Matrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

pub fn rows_of(x: &EmbeddingMatrix) -> Vec<Vec<f64>> {
    (0..x.rows()).map(|i| x.row(i).to_vec()).collect()
}

pub fn embedding(rows: &[Vec<f64>]) -> EmbeddingMatrix {
    EmbeddingMatrix::from_rows(rows[0].len(), rows).unwrap()
}

/// Between and within scatter straight from the defining sums, skipping
/// classes with no samples.
pub fn scatter(x: &[Vec<f64>], y: &[usize], classes: usize) -> (DMatrix<f64>, DMatrix<f64>) {
    let d = x[0].len();
    let col = |v: &[f64]| DMatrix::from_column_slice(d, 1, v);
    let mut m = DMatrix::zeros(d, 1);
    for h in x {
        m += col(h);
    }
    m /= x.len() as f64;
    let mut hb = DMatrix::zeros(d, d);
    let mut hw = DMatrix::zeros(d, d);
    for c in 0..classes {
        let members: Vec<&Vec<f64>> = x
            .iter()
            .zip(y)
            .filter(|(_, &k)| k == c)
            .map(|(h, _)| h)
            .collect();
        if members.is_empty() {
            continue;
        }
        let mut mi = DMatrix::zeros(d, 1);
        for h in &members {
            mi += col(h);
        }
        mi /= members.len() as f64;
        let diff = &mi - &m;
        hb += &diff * diff.transpose();
        for h in &members {
            let e = col(h) - &mi;
            hw += &e * e.transpose();
        }
    }
    (hb, hw)
}

pub fn regularize(hw: &DMatrix<f64>, gamma: f64) -> DMatrix<f64> {
    let d = hw.nrows();
    hw + DMatrix::identity(d, d) * (gamma * hw.trace() / d as f64)
}

/// Eigenvalues of `Hb w = λ Hw w`, descending, by Cholesky reduction.
pub fn generalized_eigenvalues(hb: &DMatrix<f64>, hw: &DMatrix<f64>) -> Vec<f64> {
    let l = hw.clone().cholesky().expect("Hw is positive definite").l();
    let linv = l.try_inverse().expect("triangular factor is invertible");
    let m = &linv * hb * linv.transpose();
    let m = (&m + m.transpose()) * 0.5;
    let mut v: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Eigenpairs sorted by descending eigenvalue; vectors are columns.
pub fn symmetric_eigen_desc(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let e = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..e.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| e.eigenvalues[b].total_cmp(&e.eigenvalues[a]));
    let values = order.iter().map(|&k| e.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(e.eigenvectors.nrows(), order.len(), |i, j| {
        e.eigenvectors[(i, order[j])]
    });
    (values, vectors)
}

/// Sample covariance with the `N − 1` denominator.
pub fn covariance(x: &[Vec<f64>]) -> DMatrix<f64> {
    let n = x.len();
    let d = x[0].len();
    let a = DMatrix::from_fn(n, d, |i, j| x[i][j]);
    let mean = a.row_mean();
    let mut c = a.clone();
    for i in 0..n {
        let r = c.row(i) - &mean;
        c.set_row(i, &r);
    }
    (c.transpose() * &c) / (n - 1) as f64
}

/// Mean silhouette with Euclidean distance, by brute force over all pairs.
/// Points alone in their cluster score 0.
pub fn silhouette(points: &[Vec<f64>], labels: &[usize]) -> f64 {
    let dist = |a: &[f64], b: &[f64]| {
        a.iter()
            .zip(b)
            .map(|(p, q)| (p - q) * (p - q))
            .sum::<f64>()
            .sqrt()
    };
    let k = labels.iter().max().map_or(0, |m| m + 1);
    let mut total = 0.0;
    for i in 0..points.len() {
        let mut sums = vec![0.0; k];
        let mut counts = vec![0usize; k];
        for j in 0..points.len() {
            if i != j {
                sums[labels[j]] += dist(&points[i], &points[j]);
                counts[labels[j]] += 1;
            }
        }
        let own = labels[i];
        if counts[own] == 0 {
            continue;
        }
        let a = sums[own] / counts[own] as f64;
        let b = (0..k)
            .filter(|&c| c != own && counts[c] > 0)
            .map(|c| sums[c] / counts[c] as f64)
            .fold(f64::INFINITY, f64::min);
        if b.is_finite() {
            total += (b - a) / a.max(b);
        }
    }
    total / points.len() as f64
}

pub struct LdaInstance {
    pub x: Vec<Vec<f64>>,
    pub y: Vec<usize>,
    pub classes: usize,
}

impl LdaInstance {
    pub fn class_names(&self) -> Vec<String> {
        (0..self.classes).map(|c| format!("c{c}")).collect()
    }

    pub fn labels(&self) -> Vec<String> {
        self.y.iter().map(|c| format!("c{c}")).collect()
    }
}

fn uniform(rng: &mut SeededRng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.unit()
}

/// D in 1..=6, C in 2..=4, N in (D + C + 1)..=40, every class populated.
/// Class means are spread out; noise scales differ per axis.
pub fn lda_instance(seed: u64) -> LdaInstance {
    let mut rng = SeededRng::new(seed);
    let d = 1 + rng.below(6);
    let c = 2 + rng.below(3);
    let lo = (d + c + 1).max(2 * c);
    let n = lo + rng.below(40 - lo + 1);
    let means: Vec<Vec<f64>> = (0..c)
        .map(|_| (0..d).map(|_| uniform(&mut rng, -3.0, 3.0)).collect())
        .collect();
    let scales: Vec<f64> = (0..d).map(|_| uniform(&mut rng, 0.2, 2.0)).collect();
    let mut y: Vec<usize> = (0..n)
        .map(|i| if i < c { i } else { rng.below(c) })
        .collect();
    rng.shuffle(&mut y);
    let x = y
        .iter()
        .map(|&k| {
            (0..d)
                .map(|j| means[k][j] + scales[j] * uniform(&mut rng, -1.0, 1.0))
                .collect()
        })
        .collect();
    LdaInstance { x, y, classes: c }
}

/// D in 1..=10, N in 2..=50, with a random linear mix so columns correlate.
pub fn pca_instance(seed: u64) -> Vec<Vec<f64>> {
    let mut rng = SeededRng::new(seed);
    let d = 1 + rng.below(10);
    let n = 2 + rng.below(49);
    let mix: Vec<Vec<f64>> = (0..d)
        .map(|_| (0..d).map(|_| uniform(&mut rng, -1.0, 1.0)).collect())
        .collect();
    (0..n)
        .map(|_| {
            let z: Vec<f64> = (0..d).map(|_| uniform(&mut rng, -2.0, 2.0)).collect();
            (0..d)
                .map(|j| (0..d).map(|k| mix[j][k] * z[k]).sum::<f64>() + 1.5)
                .collect()
        })
        .collect()
}
