//! Keyword-based weak labeling.
//!
//! Scans an utterance for class-revealing cue words and temporal phrases and
//! emits a candidate [`LabelVector`] for clinician review. The built-in
//! lexicon is a reconstruction covering the cue words of the reference
//! examples (extreme, moderate, slight, abruptly, gradual, constant, regular,
//! occasionally, infrequently) plus common synonyms.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::taxonomy::{FactorTaxonomy, LabelVector, ABSENT};
use crate::text::tokenize;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexiconEntry {
    pub pattern: String,
    pub factor: String,
    pub class: String,
}

/// Ordered list of cue patterns. Serializes as a bare JSON list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Lexicon {
    entries: Vec<LexiconEntry>,
}

const BUILTIN: &[(&str, &str, &str)] = &[
    ("extreme", "severity", "severe"),
    ("extremely", "severity", "severe"),
    ("severe", "severity", "severe"),
    ("severely", "severity", "severe"),
    ("terrible", "severity", "severe"),
    ("unbearable", "severity", "severe"),
    ("excruciating", "severity", "severe"),
    ("intense", "severity", "severe"),
    ("moderate", "severity", "moderate"),
    ("moderately", "severity", "moderate"),
    ("slight", "severity", "mild"),
    ("slightly", "severity", "mild"),
    ("mild", "severity", "mild"),
    ("mildly", "severity", "mild"),
    ("abruptly", "onset", "sudden"),
    ("abrupt", "onset", "sudden"),
    ("sudden", "onset", "sudden"),
    ("suddenly", "onset", "sudden"),
    ("all of a sudden", "onset", "sudden"),
    ("out of nowhere", "onset", "sudden"),
    ("gradual", "onset", "gradual"),
    ("gradually", "onset", "gradual"),
    ("slowly", "onset", "gradual"),
    ("little by little", "onset", "gradual"),
    ("constant", "frequency", "continuous"),
    ("constantly", "frequency", "continuous"),
    ("continuous", "frequency", "continuous"),
    ("continuously", "frequency", "continuous"),
    ("regular", "frequency", "continuous"),
    ("persistent", "frequency", "continuous"),
    ("nonstop", "frequency", "continuous"),
    ("all the time", "frequency", "continuous"),
    ("occasionally", "frequency", "on-off"),
    ("occasional", "frequency", "on-off"),
    ("infrequently", "frequency", "on-off"),
    ("infrequent", "frequency", "on-off"),
    ("intermittent", "frequency", "on-off"),
    ("intermittently", "frequency", "on-off"),
    ("sometimes", "frequency", "on-off"),
    ("on and off", "frequency", "on-off"),
    ("off and on", "frequency", "on-off"),
    ("on off", "frequency", "on-off"),
    ("comes and goes", "frequency", "on-off"),
    ("now and then", "frequency", "on-off"),
];

impl Lexicon {
    /// Lowercases patterns and checks every target against `taxonomy`.
    pub fn new(entries: Vec<LexiconEntry>, taxonomy: &FactorTaxonomy) -> Result<Self> {
        let lex = Lexicon {
            entries: entries
                .into_iter()
                .map(|e| LexiconEntry {
                    pattern: e.pattern.to_lowercase(),
                    ..e
                })
                .collect(),
        };
        lex.validate(taxonomy)?;
        Ok(lex)
    }

    /// The shipped lexicon, keeping only entries whose class exists in
    /// `taxonomy`.
    pub fn builtin(taxonomy: &FactorTaxonomy) -> Self {
        Lexicon {
            entries: BUILTIN
                .iter()
                .filter(|(_, f, c)| {
                    taxonomy
                        .factor(f)
                        .is_some_and(|fac| fac.classes.iter().any(|k| k == c))
                })
                .map(|&(p, f, c)| LexiconEntry {
                    pattern: p.to_string(),
                    factor: f.to_string(),
                    class: c.to_string(),
                })
                .collect(),
        }
    }

    pub fn validate(&self, taxonomy: &FactorTaxonomy) -> Result<()> {
        for e in &self.entries {
            if tokenize(&e.pattern).is_empty() {
                return Err(Error::Validation(format!(
                    "lexicon pattern {:?} has no tokens",
                    e.pattern
                )));
            }
            if e.pattern != e.pattern.to_lowercase() {
                return Err(Error::Validation(format!(
                    "lexicon pattern {:?} is not lowercase",
                    e.pattern
                )));
            }
            let factor = taxonomy.factor(&e.factor).ok_or_else(|| {
                Error::Validation(format!("lexicon names unknown factor `{}`", e.factor))
            })?;
            if e.class == ABSENT || factor.class_index(&e.class).is_none() {
                return Err(Error::Validation(format!(
                    "lexicon names unknown class `{}` for factor `{}`",
                    e.class, e.factor
                )));
            }
        }
        Ok(())
    }

    pub fn entries(&self) -> &[LexiconEntry] {
        &self.entries
    }
}

/// Unit words and quantifiers recognized in temporal phrases.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DurationPattern {
    /// Unit word to duration class.
    pub units: BTreeMap<String, String>,
    /// Words accepted as a quantifier in front of a unit. Digit strings are
    /// always accepted.
    pub quantifiers: Vec<String>,
}

const UNITS: &[(&str, &str)] = &[
    ("minute", "minutes"),
    ("minutes", "minutes"),
    ("min", "minutes"),
    ("mins", "minutes"),
    ("hour", "hours"),
    ("hours", "hours"),
    ("hr", "hours"),
    ("hrs", "hours"),
    ("day", "days"),
    ("days", "days"),
    ("week", "weeks"),
    ("weeks", "weeks"),
    ("month", "months"),
    ("months", "months"),
];

const QUANTIFIERS: &[&str] = &[
    "a", "an", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten",
    "eleven", "twelve", "couple", "few", "several", "many", "some",
];

impl DurationPattern {
    /// Built-in unit words restricted to the duration classes of `taxonomy`.
    pub fn for_taxonomy(taxonomy: &FactorTaxonomy) -> Self {
        let classes = taxonomy
            .factor("duration")
            .map(|f| f.classes.clone())
            .unwrap_or_default();
        DurationPattern {
            units: UNITS
                .iter()
                .filter(|(_, c)| classes.iter().any(|k| k == c))
                .map(|&(u, c)| (u.to_string(), c.to_string()))
                .collect(),
            quantifiers: QUANTIFIERS.iter().map(|q| q.to_string()).collect(),
        }
    }

    pub fn validate(&self, taxonomy: &FactorTaxonomy) -> Result<()> {
        let duration = taxonomy
            .factor("duration")
            .ok_or_else(|| Error::Validation("taxonomy has no duration factor".into()))?;
        for (unit, class) in &self.units {
            if class == ABSENT || duration.class_index(class).is_none() {
                return Err(Error::Validation(format!(
                    "unit `{unit}` maps to unknown duration class `{class}`"
                )));
            }
        }
        Ok(())
    }

    fn is_quantifier(&self, token: &str) -> bool {
        token.bytes().all(|b| b.is_ascii_digit()) || self.quantifiers.iter().any(|q| q == token)
    }
}

/// A temporal phrase located in tokenized text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DurationMatch {
    pub quantifier: Option<String>,
    pub unit: String,
    pub class: String,
    /// Token index of the unit word.
    pub position: usize,
}

/// First `(quantifier) unit` phrase in `text`, if any.
pub fn find_duration(text: &str, patterns: &DurationPattern) -> Option<DurationMatch> {
    let tokens = tokenize(text);
    tokens.iter().enumerate().find_map(|(i, t)| {
        let class = patterns.units.get(t)?;
        let quantifier = i
            .checked_sub(1)
            .map(|j| &tokens[j])
            .filter(|q| patterns.is_quantifier(q))
            .cloned();
        Some(DurationMatch {
            quantifier,
            unit: t.clone(),
            class: class.clone(),
            position: i,
        })
    })
}

/// Duration class of the first temporal phrase, or `absent`.
pub fn extract_duration(text: &str, patterns: &DurationPattern) -> String {
    find_duration(text, patterns).map_or_else(|| ABSENT.to_string(), |m| m.class)
}

/// Labels `text` with the built-in duration patterns for `taxonomy`.
pub fn apply_lexicon(text: &str, lexicon: &Lexicon, taxonomy: &FactorTaxonomy) -> LabelVector {
    apply_lexicon_with(
        text,
        lexicon,
        &DurationPattern::for_taxonomy(taxonomy),
        taxonomy,
    )
}

/// Case-insensitive longest-match-first scan. Each factor takes the class of
/// its first match in token order; the duration slot falls back to
/// [`extract_duration`]. Entries naming classes outside `taxonomy` are
/// ignored, so the result always validates.
pub fn apply_lexicon_with(
    text: &str,
    lexicon: &Lexicon,
    patterns: &DurationPattern,
    taxonomy: &FactorTaxonomy,
) -> LabelVector {
    let tokens = tokenize(text);
    let compiled: Vec<(Vec<String>, &LexiconEntry)> = lexicon
        .entries
        .iter()
        .filter(|e| {
            taxonomy
                .factor(&e.factor)
                .is_some_and(|f| e.class != ABSENT && f.class_index(&e.class).is_some())
        })
        .map(|e| (tokenize(&e.pattern), e))
        .filter(|(p, _)| !p.is_empty())
        .collect();

    let mut labels = taxonomy.all_absent();
    let mut filled: Vec<&str> = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let mut best: Option<(usize, &LexiconEntry)> = None;
        for (pat, entry) in &compiled {
            let fits = tokens.len() - i >= pat.len() && tokens[i..i + pat.len()] == pat[..];
            if fits && best.is_none_or(|(len, _)| pat.len() > len) {
                best = Some((pat.len(), entry));
            }
        }
        match best {
            Some((len, entry)) => {
                if !filled.contains(&entry.factor.as_str()) {
                    labels.set(&entry.factor, &entry.class);
                    filled.push(&entry.factor);
                }
                i += len;
            }
            None => i += 1,
        }
    }

    if !filled.contains(&"duration") {
        let class = extract_duration(text, patterns);
        if taxonomy
            .factor("duration")
            .is_some_and(|f| f.class_index(&class).is_some())
        {
            labels.set("duration", &class);
        }
    }
    labels
}
