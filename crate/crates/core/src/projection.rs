//! Two-dimensional discriminant coordinates for cluster plots.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::embed::EmbeddingMatrix;
use crate::lda::{project, LdaModel};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionRow {
    pub id: String,
    pub factor: String,
    pub class: String,
    pub x: f64,
    pub y: f64,
}

/// Projects rows of a head's input space onto its first two discriminant
/// directions. Heads with a single direction put every point at `y = 0`.
pub fn export_projection<L: AsRef<str>, I: AsRef<str>>(
    head: &LdaModel,
    factor: &str,
    x: &EmbeddingMatrix,
    labels: &[L],
    ids: &[I],
) -> Result<Vec<ProjectionRow>> {
    if labels.len() != x.rows() || ids.len() != x.rows() {
        return Err(Error::Argument(alloc::format!(
            "{} rows, {} labels and {} ids",
            x.rows(),
            labels.len(),
            ids.len()
        )));
    }
    let z = project(head, x)?;
    Ok((0..x.rows())
        .map(|i| {
            let row = z.row(i);
            ProjectionRow {
                id: ids[i].as_ref().into(),
                factor: factor.into(),
                class: labels[i].as_ref().into(),
                x: row[0],
                y: row.get(1).copied().unwrap_or(0.0),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lda::{fit_lda, LdaConfig};
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn single_direction_pads_with_zero() {
        let x = EmbeddingMatrix::from_rows(2, &[[0.0, 1.0], [1.0, 0.5], [4.0, 0.0], [5.0, 0.2]])
            .unwrap();
        let y = ["A", "A", "B", "B"];
        let classes = vec!["A".to_string(), "B".to_string()];
        let m = fit_lda(&x, &y, &classes, &LdaConfig::default()).unwrap();
        let ids = ["p", "q", "r", "s"];
        let rows = export_projection(&m, "severity", &x, &y, &ids).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| r.y == 0.0));
        let got: Vec<&str> = rows.iter().map(|r| r.id.as_str()).collect();
        assert_eq!(got, ids);
        assert!(export_projection(&m, "severity", &x, &y[..3], &ids).is_err());
    }
}
