//! Sentence vectors: embedding matrices, word-vector average pooling and a
//! deterministic signed feature-hash embedder.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::hash::Hasher;

use fnv::FnvHasher;

use crate::linalg::Matrix;
use crate::text::tokenize;
use crate::{Error, Result};

/// `N × D` matrix of sentence vectors, one row per utterance. Entries are
/// finite and `D ≥ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingMatrix(Matrix);

impl EmbeddingMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        if m.cols() == 0 {
            return Err(Error::Argument(
                "embedding dimension must be at least 1".into(),
            ));
        }
        if !m.is_finite() {
            return Err(Error::Argument("embedding has non-finite entries".into()));
        }
        Ok(EmbeddingMatrix(m))
    }

    pub fn from_rows<R: AsRef<[f64]>>(dim: usize, rows: &[R]) -> Result<Self> {
        EmbeddingMatrix::new(Matrix::from_rows(dim, rows)?)
    }

    pub fn rows(&self) -> usize {
        self.0.rows()
    }

    pub fn dim(&self) -> usize {
        self.0.cols()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.0.row(i)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }
}

/// Word → vector lookup with a fixed dimension.
#[derive(Debug, Clone, Default)]
pub struct WordVectorTable {
    dim: usize,
    words: Vec<String>,
    data: Vec<f64>,
    index: BTreeMap<String, usize>,
}

impl PartialEq for WordVectorTable {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.words == other.words && self.data == other.data
    }
}

impl WordVectorTable {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Argument(
                "word vector dimension must be positive".into(),
            ));
        }
        Ok(WordVectorTable {
            dim,
            ..Default::default()
        })
    }

    pub fn insert(&mut self, word: String, vector: &[f64]) -> Result<()> {
        if vector.len() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                found: vector.len(),
            });
        }
        if !vector.iter().all(|x| x.is_finite()) {
            return Err(Error::Validation(format!(
                "vector for {word:?} has non-finite components"
            )));
        }
        if self.index.contains_key(&word) {
            return Err(Error::Validation(format!("duplicate word {word:?}")));
        }
        self.index.insert(word.clone(), self.words.len());
        self.words.push(word);
        self.data.extend_from_slice(vector);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.index
            .get(word)
            .map(|&i| &self.data[i * self.dim..(i + 1) * self.dim])
    }

    /// Entries in insertion order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.words
            .iter()
            .zip(self.data.chunks_exact(self.dim))
            .map(|(w, v)| (w.as_str(), v))
    }
}

/// Mean of the vectors of in-vocabulary tokens. Tokens are looked up as
/// produced by [`tokenize`] (lowercased); out-of-vocabulary tokens are
/// skipped.
pub fn embed_average(text: &str, table: &WordVectorTable) -> Result<Vec<f64>> {
    let mut sum = vec![0.0; table.dim()];
    let mut hits = 0usize;
    for tok in tokenize(text) {
        if let Some(v) = table.get(&tok) {
            for (s, x) in sum.iter_mut().zip(v) {
                *s += x;
            }
            hits += 1;
        }
    }
    if hits == 0 {
        return Err(Error::Coverage(text.into()));
    }
    let n = hits as f64;
    for s in &mut sum {
        *s /= n;
    }
    Ok(sum)
}

const SIGN_SALT: u64 = 0x9E37_79B9_7F4A_7C15;

fn fnv1a(seed: u64, token: &str) -> u64 {
    let mut h = FnvHasher::default();
    h.write(&seed.to_le_bytes());
    h.write(token.as_bytes());
    h.finish()
}

/// Signed feature hashing, L2-normalized.
///
/// For each token, FNV-1a-64 over the little-endian seed bytes followed by
/// the UTF-8 token picks the index (`hash mod dim`). A second FNV-1a-64
/// with the seed XORed by `0x9E3779B97F4A7C15` gives the sign from its top
/// bit. If the signed contributions cancel to zero the unsigned counts are
/// used instead, so the result always has unit norm.
pub fn embed_hash(text: &str, dim: usize, seed: u64) -> Result<Vec<f64>> {
    if dim < 2 {
        return Err(Error::Argument(format!(
            "hash dimension must be at least 2, got {dim}"
        )));
    }
    let tokens = tokenize(text);
    if tokens.is_empty() {
        return Err(Error::Argument(format!("no tokens in {text:?}")));
    }
    let mut signed = vec![0.0; dim];
    let mut unsigned = vec![0.0; dim];
    for tok in &tokens {
        let idx = (fnv1a(seed, tok) % dim as u64) as usize;
        let sign = if fnv1a(seed ^ SIGN_SALT, tok) >> 63 == 0 {
            1.0
        } else {
            -1.0
        };
        signed[idx] += sign;
        unsigned[idx] += 1.0;
    }
    let mut v = if signed.iter().any(|x| *x != 0.0) {
        signed
    } else {
        unsigned
    };
    let norm = crate::linalg::norm(&v);
    for x in &mut v {
        *x /= norm;
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn table(entries: &[(&str, &[f64])]) -> WordVectorTable {
        let mut t = WordVectorTable::new(entries[0].1.len()).unwrap();
        for (w, v) in entries {
            t.insert(w.to_string(), v).unwrap();
        }
        t
    }

    #[test]
    fn average_pooling() {
        let t = table(&[("a", &[1.0, 0.0]), ("b", &[0.0, 1.0])]);
        assert_eq!(embed_average("a b", &t).unwrap(), [0.5, 0.5]);
        assert_eq!(embed_average("a zzz", &t).unwrap(), [1.0, 0.0]);
        assert_eq!(embed_average("A", &t).unwrap(), [1.0, 0.0]);
    }

    #[test]
    fn zero_coverage_is_an_error() {
        let t = table(&[("a", &[1.0, 0.0])]);
        assert!(matches!(
            embed_average("zzz yyy", &t),
            Err(Error::Coverage(_))
        ));
    }

    #[test]
    fn table_rejects_bad_entries() {
        let mut t = table(&[("a", &[1.0, 0.0])]);
        assert!(t.insert("a".into(), &[0.0, 0.0]).is_err());
        assert!(t.insert("b".into(), &[0.0]).is_err());
        assert!(t.insert("c".into(), &[f64::NAN, 0.0]).is_err());
        assert!(WordVectorTable::new(0).is_err());
        assert_eq!(t.len(), 1);
    }

    #[test]
    fn hash_is_deterministic_and_unit_norm() {
        let a = embed_hash("severe headache", 256, 1).unwrap();
        let b = embed_hash("severe headache", 256, 1).unwrap();
        assert_eq!(a, b);
        assert!((crate::linalg::norm(&a) - 1.0).abs() < 1e-12);
        let c = embed_hash("mild headache", 256, 1).unwrap();
        assert!(a.iter().zip(&c).any(|(x, y)| x != y));
        assert_ne!(embed_hash("severe headache", 256, 2).unwrap(), a);
    }

    #[test]
    fn hash_rejects_empty_and_tiny_dims() {
        assert!(embed_hash("  ,, ", 16, 0).is_err());
        assert!(embed_hash("ok", 1, 0).is_err());
    }

    #[test]
    fn embedding_matrix_checks() {
        assert!(EmbeddingMatrix::from_rows(0, &[[0.0; 0]; 0]).is_err());
        assert!(EmbeddingMatrix::from_rows(1, &[[f64::INFINITY]]).is_err());
        let e = EmbeddingMatrix::from_rows(2, &[[1.0, 2.0]]).unwrap();
        assert_eq!((e.rows(), e.dim()), (1, 2));
    }
}
