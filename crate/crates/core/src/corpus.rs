//! Dataset records, train/test splitting and the synthetic corpus generator.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::rng::SeededRng;
use crate::taxonomy::{FactorTaxonomy, LabelVector, ABSENT};
use crate::{Error, Result};

/// One utterance with its characterization of a single parent entity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledUtterance {
    pub id: String,
    pub text: String,
    pub parent: String,
    pub labels: LabelVector,
}

/// Checks text, id uniqueness and labels; returns records with labels in
/// taxonomy order. `records` keep their order.
pub fn validate_dataset(
    records: Vec<LabeledUtterance>,
    taxonomy: &FactorTaxonomy,
) -> Result<Vec<LabeledUtterance>> {
    let mut seen = BTreeSet::new();
    records
        .into_iter()
        .map(|mut r| {
            if r.text.trim().is_empty() {
                return Err(Error::Validation(format!(
                    "record `{}` has empty text",
                    r.id
                )));
            }
            if !seen.insert(r.id.clone()) {
                return Err(Error::Validation(format!("duplicate id `{}`", r.id)));
            }
            r.labels = taxonomy
                .check(&r.labels)
                .map_err(|e| Error::Validation(format!("record `{}`: {e}", r.id)))?;
            Ok(r)
        })
        .collect()
}

/// Shuffles with the seeded generator and cuts after `floor(ratio·N)`.
pub fn split_train_test<T: Clone>(
    records: &[T],
    ratio: f64,
    seed: u64,
) -> Result<(Vec<T>, Vec<T>)> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::Argument(format!(
            "split ratio must be in (0, 1), got {ratio}"
        )));
    }
    if records.is_empty() {
        return Err(Error::Argument("cannot split an empty dataset".into()));
    }
    let n = records.len();
    let mut order: Vec<usize> = (0..n).collect();
    SeededRng::new(seed).shuffle(&mut order);
    // The nudge keeps products like 0.29 * 100 from flooring one short.
    let cut = libm::floor(ratio * n as f64 + 1e-9) as usize;
    let cut = cut.min(n);
    let train = order[..cut].iter().map(|&i| records[i].clone()).collect();
    let test = order[cut..].iter().map(|&i| records[i].clone()).collect();
    Ok((train, test))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub count: usize,
    pub seed: u64,
    pub max_factors: usize,
}

impl SyntheticSpec {
    pub fn new(count: usize, seed: u64) -> Self {
        SyntheticSpec {
            count,
            seed,
            max_factors: 4,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::Argument("synthetic count must be at least 1".into()));
        }
        if !(1..=4).contains(&self.max_factors) {
            return Err(Error::Argument(format!(
                "max factors per sentence must be in 1..=4, got {}",
                self.max_factors
            )));
        }
        Ok(())
    }
}

const PARENTS: &[(&str, &str)] = &[
    ("headache", "headache"),
    ("headache", "pain in the head"),
    ("migraine", "migraine"),
    ("back pain", "back pain"),
];

const OPENERS: &[&str] = &["I have", "I am having", "She is having", "I get"];

// `{q}` is replaced by a quantifier, `{u}` by the duration class name.
const DURATION_TEMPLATES: &[&str] = &[
    "for {q} {u}",
    "for the last {q} {u}",
    "since last {q} {u}",
    "over the past {q} {u}",
    "for a few {u}",
];
const QUANTIFIERS: &[&str] = &["2", "3", "five", "several"];

fn severity_adjectives(class: &str) -> &'static [&'static str] {
    match class {
        "severe" => &["extreme"],
        "moderate" => &["moderate"],
        "mild" => &["slight"],
        _ => &[],
    }
}

fn frequency_clauses(class: &str) -> &'static [&'static str] {
    match class {
        "continuous" => &[
            "it is constant",
            "it is continuous",
            "it is there all the time",
        ],
        "on-off" => &[
            "it comes and goes",
            "it happens occasionally",
            "I get it on and off",
        ],
        _ => &[],
    }
}

fn onset_clauses(class: &str) -> &'static [&'static str] {
    match class {
        "sudden" => &["it started abruptly", "it came on suddenly"],
        "gradual" => &["it started gradually", "it came on slowly"],
        _ => &[],
    }
}

/// Generates templated utterances whose text carries a cue phrase for every
/// non-absent label. Deterministic in `spec`.
///
/// Severity cues go in front of the parent term ("an extreme headache"); the
/// other factors become clauses in random order. Classes without a built-in
/// cue (from an overridden taxonomy) are spelled out literally.
pub fn generate_synthetic(
    spec: &SyntheticSpec,
    taxonomy: &FactorTaxonomy,
) -> Result<Vec<LabeledUtterance>> {
    spec.validate()?;
    let mut rng = SeededRng::new(spec.seed);
    let factors = taxonomy.factors();
    let mut out = Vec::with_capacity(spec.count);

    for i in 0..spec.count {
        let k = 1 + rng.below(spec.max_factors.min(factors.len()));
        let mut chosen: Vec<usize> = (0..factors.len()).collect();
        rng.shuffle(&mut chosen);
        chosen.truncate(k);

        let mut labels = taxonomy.all_absent();
        for &f in &chosen {
            let fac = &factors[f];
            labels.set(&fac.name, rng.choose(&fac.classes));
        }

        let &(parent, surface) = rng.choose(PARENTS);
        let opener = *rng.choose(OPENERS);
        let severity = labels.get("severity").unwrap_or(ABSENT).to_string();
        let noun_phrase = if severity == ABSENT {
            format!("a {surface}")
        } else {
            let adj = match severity_adjectives(&severity) {
                [] => severity.clone(),
                options => rng.choose(options).to_string(),
            };
            format!("{} {adj} {surface}", article(&adj))
        };

        let mut clauses = Vec::new();
        for fac in factors {
            let class = labels.get(&fac.name).unwrap_or(ABSENT);
            if class == ABSENT {
                continue;
            }
            let clause = match fac.name.as_str() {
                "duration" => {
                    let q = *rng.choose(QUANTIFIERS);
                    rng.choose(DURATION_TEMPLATES)
                        .replace("{q}", q)
                        .replace("{u}", class)
                }
                "frequency" => pick_or_literal(&mut rng, frequency_clauses(class), "it is", class),
                "onset" => pick_or_literal(&mut rng, onset_clauses(class), "the onset was", class),
                _ => continue,
            };
            clauses.push(clause);
        }
        rng.shuffle(&mut clauses);

        let mut text = format!("{opener} {noun_phrase}");
        let last = clauses.len().saturating_sub(1);
        for (j, c) in clauses.iter().enumerate() {
            let joint = match j {
                0 if c.starts_with("it ") || c.starts_with("I ") => ", ",
                0 => " ",
                j if j == last => " and ",
                _ => ", ",
            };
            text.push_str(joint);
            text.push_str(c);
        }
        text.push('.');

        out.push(LabeledUtterance {
            id: format!("syn-{i:05}"),
            text,
            parent: parent.to_string(),
            labels,
        });
    }
    Ok(out)
}

fn pick_or_literal(rng: &mut SeededRng, options: &[&str], lead: &str, class: &str) -> String {
    match options {
        [] => format!("{lead} {class}"),
        _ => rng.choose(options).to_string(),
    }
}

fn article(word: &str) -> &'static str {
    match word.chars().next() {
        Some('a' | 'e' | 'i' | 'o' | 'u') => "an",
        _ => "a",
    }
}
