//! Subset accuracy and micro-averaged precision, recall and F1.
//!
//! Counting per factor slot:
//!
//! | gold      | predicted | counts   |
//! |-----------|-----------|----------|
//! | c         | c         | TP       |
//! | absent    | c         | FP       |
//! | c         | absent    | FN       |
//! | c         | c' ≠ c    | FP + FN  |
//! | absent    | absent    | nothing  |

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::taxonomy::{LabelVector, ABSENT};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl ConfusionCounts {
    fn record(&mut self, gold: &str, pred: &str) {
        match (gold == ABSENT, pred == ABSENT) {
            (true, true) => {}
            (true, false) => self.fp += 1,
            (false, true) => self.fn_ += 1,
            (false, false) if gold == pred => self.tp += 1,
            (false, false) => {
                self.fp += 1;
                self.fn_ += 1;
            }
        }
    }

    pub fn precision(&self) -> f64 {
        ratio(self.tp, self.tp + self.fp)
    }

    pub fn recall(&self) -> f64 {
        ratio(self.tp, self.tp + self.fn_)
    }

    /// Harmonic mean of precision and recall, 0 when both are 0.
    pub fn f1(&self) -> f64 {
        f1(self.precision(), self.recall())
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn f1(p: f64, r: f64) -> f64 {
    if p + r > 0.0 {
        2.0 * p * r / (p + r)
    } else {
        0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorReport {
    pub factor: String,
    /// Fraction of samples whose slot matches exactly, `absent` included.
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub counts: ConfusionCounts,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub n: usize,
    /// Exact match of the whole label vector.
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub counts: ConfusionCounts,
    pub per_factor: Vec<FactorReport>,
}

/// Scores predictions against gold labels. Slots are matched by factor
/// name in the order of the first gold vector.
pub fn evaluate(predictions: &[LabelVector], golds: &[LabelVector]) -> Result<EvalReport> {
    if predictions.len() != golds.len() {
        return Err(Error::Argument(format!(
            "{} predictions for {} gold labels",
            predictions.len(),
            golds.len()
        )));
    }
    if golds.is_empty() {
        return Err(Error::Argument("nothing to evaluate".into()));
    }
    let factors: Vec<String> = golds[0].iter().map(|(f, _)| f.to_string()).collect();
    let mut per: Vec<(ConfusionCounts, usize)> =
        factors.iter().map(|_| Default::default()).collect();
    let mut exact = 0usize;

    for (i, (pred, gold)) in predictions.iter().zip(golds).enumerate() {
        if gold.len() != factors.len() || pred.len() != factors.len() {
            return Err(Error::Argument(format!(
                "sample {i} has a different set of factors"
            )));
        }
        let mut all = true;
        for (f, (counts, hits)) in factors.iter().zip(per.iter_mut()) {
            let (Some(g), Some(p)) = (gold.get(f), pred.get(f)) else {
                return Err(Error::Argument(format!(
                    "sample {i} is missing factor `{f}`"
                )));
            };
            counts.record(g, p);
            if g == p {
                *hits += 1;
            } else {
                all = false;
            }
        }
        if all {
            exact += 1;
        }
    }

    let n = golds.len();
    let mut total = ConfusionCounts::default();
    let per_factor = factors
        .into_iter()
        .zip(per)
        .map(|(factor, (counts, hits))| {
            total.tp += counts.tp;
            total.fp += counts.fp;
            total.fn_ += counts.fn_;
            FactorReport {
                factor,
                accuracy: hits as f64 / n as f64,
                precision: counts.precision(),
                recall: counts.recall(),
                f1: counts.f1(),
                counts,
            }
        })
        .collect();

    Ok(EvalReport {
        n,
        accuracy: exact as f64 / n as f64,
        precision: total.precision(),
        recall: total.recall(),
        f1: total.f1(),
        counts: total,
        per_factor,
    })
}
