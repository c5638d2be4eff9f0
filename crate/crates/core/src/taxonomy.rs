//! Factor taxonomy and per-utterance label vectors.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;

use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// Class used in every factor when the utterance does not mention it.
pub const ABSENT: &str = "absent";

/// Factor names, in their fixed order.
pub const FACTOR_NAMES: [&str; 4] = ["duration", "frequency", "severity", "onset"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub name: String,
    /// Declared classes. `absent` is implicit and never listed.
    pub classes: Vec<String>,
}

impl Factor {
    /// Number of classes including `absent`.
    pub fn width(&self) -> usize {
        self.classes.len() + 1
    }

    /// Index of `class` among the declared classes, `absent` last.
    pub fn class_index(&self, class: &str) -> Option<usize> {
        if class == ABSENT {
            return Some(self.classes.len());
        }
        self.classes.iter().position(|c| c == class)
    }

    /// Declared classes followed by `absent`.
    pub fn all_classes(&self) -> Vec<String> {
        let mut out = self.classes.clone();
        out.push(ABSENT.to_string());
        out
    }

    pub fn class_name(&self, index: usize) -> &str {
        self.classes.get(index).map_or(ABSENT, String::as_str)
    }
}

/// The four characterization factors and their class sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorTaxonomy {
    factors: Vec<Factor>,
}

impl Default for FactorTaxonomy {
    fn default() -> Self {
        let f = |name: &str, classes: &[&str]| Factor {
            name: name.to_string(),
            classes: classes.iter().map(|c| c.to_string()).collect(),
        };
        FactorTaxonomy {
            factors: vec![
                f("duration", &["minutes", "hours", "days", "weeks", "months"]),
                f("frequency", &["continuous", "on-off"]),
                f("severity", &["mild", "moderate", "severe"]),
                f("onset", &["sudden", "gradual"]),
            ],
        }
    }
}

impl FactorTaxonomy {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        let t = FactorTaxonomy { factors };
        t.validate()?;
        Ok(t)
    }

    /// Checks factor order, class uniqueness and that `absent` is not declared.
    /// Needed after deserializing an override file.
    pub fn validate(&self) -> Result<()> {
        let names: Vec<&str> = self.factors.iter().map(|f| f.name.as_str()).collect();
        if names != FACTOR_NAMES {
            return Err(Error::Validation(format!(
                "taxonomy factors must be {FACTOR_NAMES:?} in that order, got {names:?}"
            )));
        }
        for f in &self.factors {
            if f.classes.is_empty() {
                return Err(Error::Validation(format!(
                    "factor `{}` has no classes",
                    f.name
                )));
            }
            for (i, c) in f.classes.iter().enumerate() {
                if c == ABSENT {
                    return Err(Error::Validation(format!(
                        "factor `{}` must not declare `{ABSENT}`",
                        f.name
                    )));
                }
                if c.is_empty() || f.classes[..i].contains(c) {
                    return Err(Error::Validation(format!(
                        "factor `{}` has an empty or duplicate class `{c}`",
                        f.name
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn factor(&self, name: &str) -> Option<&Factor> {
        self.factors.iter().find(|f| f.name == name)
    }

    pub fn factor_index(&self, name: &str) -> Option<usize> {
        self.factors.iter().position(|f| f.name == name)
    }

    pub fn all_absent(&self) -> LabelVector {
        LabelVector {
            slots: self
                .factors
                .iter()
                .map(|f| (f.name.clone(), ABSENT.to_string()))
                .collect(),
        }
    }

    /// Validates `labels` and returns them reordered to taxonomy order.
    pub fn check(&self, labels: &LabelVector) -> Result<LabelVector> {
        for (factor, _) in &labels.slots {
            if self.factor(factor).is_none() {
                return Err(Error::Validation(format!("unknown factor `{factor}`")));
            }
        }
        let mut slots = Vec::with_capacity(self.factors.len());
        for f in &self.factors {
            let mut hits = labels.slots.iter().filter(|(n, _)| *n == f.name);
            let (_, class) = hits
                .next()
                .ok_or_else(|| Error::Validation(format!("missing factor `{}`", f.name)))?;
            if hits.next().is_some() {
                return Err(Error::Validation(format!(
                    "factor `{}` given twice",
                    f.name
                )));
            }
            if f.class_index(class).is_none() {
                return Err(Error::Validation(format!(
                    "unknown class `{class}` for factor `{}`",
                    f.name
                )));
            }
            slots.push((f.name.clone(), class.clone()));
        }
        Ok(LabelVector { slots })
    }
}

/// One class per factor, `absent` included. Serializes as a JSON object
/// whose keys keep the stored factor order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabelVector {
    slots: Vec<(String, String)>,
}

impl LabelVector {
    pub fn from_pairs<F: Into<String>, C: Into<String>>(
        pairs: impl IntoIterator<Item = (F, C)>,
    ) -> Self {
        LabelVector {
            slots: pairs
                .into_iter()
                .map(|(f, c)| (f.into(), c.into()))
                .collect(),
        }
    }

    pub fn get(&self, factor: &str) -> Option<&str> {
        self.slots
            .iter()
            .find(|(f, _)| f == factor)
            .map(|(_, c)| c.as_str())
    }

    /// Sets an existing slot or appends a new one.
    pub fn set(&mut self, factor: &str, class: &str) {
        match self.slots.iter_mut().find(|(f, _)| f == factor) {
            Some(slot) => slot.1 = class.to_string(),
            None => self.slots.push((factor.to_string(), class.to_string())),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.slots.iter().map(|(f, c)| (f.as_str(), c.as_str()))
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn is_all_absent(&self) -> bool {
        self.slots.iter().all(|(_, c)| c == ABSENT)
    }
}

impl fmt::Display for LabelVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (factor, class) in &self.slots {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "{factor}={class}")?;
        }
        Ok(())
    }
}

impl Serialize for LabelVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> core::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.slots.len()))?;
        for (f, c) in &self.slots {
            map.serialize_entry(f, c)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for LabelVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> core::result::Result<Self, D::Error> {
        struct SlotVisitor;

        impl<'de> Visitor<'de> for SlotVisitor {
            type Value = LabelVector;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an object mapping factor names to class names")
            }

            fn visit_map<A: MapAccess<'de>>(
                self,
                mut map: A,
            ) -> core::result::Result<LabelVector, A::Error> {
                let mut slots = Vec::new();
                while let Some((k, v)) = map.next_entry::<String, String>()? {
                    slots.push((k, v));
                }
                Ok(LabelVector { slots })
            }
        }

        deserializer.deserialize_map(SlotVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_taxonomy_is_valid() {
        let t = FactorTaxonomy::default();
        t.validate().unwrap();
        let widths: Vec<usize> = t.factors().iter().map(Factor::width).collect();
        assert_eq!(widths, [6, 3, 4, 3]);
    }

    #[test]
    fn absent_cannot_be_declared() {
        let mut t = FactorTaxonomy::default();
        t.factors[2].classes.push(ABSENT.to_string());
        assert!(matches!(t.validate(), Err(Error::Validation(_))));
    }

    #[test]
    fn factor_order_is_fixed() {
        let mut t = FactorTaxonomy::default();
        t.factors.swap(0, 1);
        assert!(t.validate().is_err());
    }

    #[test]
    fn check_reorders_and_rejects_unknowns() {
        let t = FactorTaxonomy::default();
        let lv = LabelVector::from_pairs([
            ("onset", "sudden"),
            ("severity", "absent"),
            ("duration", "months"),
            ("frequency", "absent"),
        ]);
        let ok = t.check(&lv).unwrap();
        let order: Vec<&str> = ok.iter().map(|(f, _)| f).collect();
        assert_eq!(order, FACTOR_NAMES);

        let mut bad = ok.clone();
        bad.set("severity", "extremely");
        let err = t.check(&bad).unwrap_err();
        assert!(matches!(err, Error::Validation(ref m) if m.contains("extremely")));

        let mut extra = ok.clone();
        extra.set("location", "head");
        assert!(t.check(&extra).is_err());

        let missing = LabelVector::from_pairs([("duration", "days")]);
        assert!(t.check(&missing).is_err());
    }

    #[test]
    fn json_keeps_key_order() {
        let lv = FactorTaxonomy::default().all_absent();
        let s = serde_json::to_string(&lv).unwrap();
        assert_eq!(
            s,
            r#"{"duration":"absent","frequency":"absent","severity":"absent","onset":"absent"}"#
        );
        let back: LabelVector = serde_json::from_str(&s).unwrap();
        assert_eq!(back, lv);
    }
}
