//! JSON Lines utterance files plus the JSON taxonomy and lexicon files.
//!
//! Blank lines are skipped. Parse errors carry the 1-based line number.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sfc_core::{validate_dataset, FactorTaxonomy, LabeledUtterance, Lexicon};

use crate::{Error, Result};

/// Unlabeled input for the weak labeler.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawUtterance {
    pub id: String,
    pub text: String,
    pub parent: String,
}

fn parse_lines<T, R>(reader: R) -> Result<Vec<T>>
where
    T: for<'de> Deserialize<'de>,
    R: BufRead,
{
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::Parse {
            line: i + 1,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let rec = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: i + 1,
            message: e.to_string(),
        })?;
        out.push(rec);
    }
    Ok(out)
}

/// Reads labeled records and validates them against `taxonomy`. Labels come
/// back in taxonomy order.
pub fn parse_dataset<R: BufRead>(
    reader: R,
    taxonomy: &FactorTaxonomy,
) -> Result<Vec<LabeledUtterance>> {
    let records = parse_lines(reader)?;
    Ok(validate_dataset(records, taxonomy)?)
}

pub fn parse_raw<R: BufRead>(reader: R) -> Result<Vec<RawUtterance>> {
    let records: Vec<RawUtterance> = parse_lines(reader)?;
    let mut seen = std::collections::HashSet::new();
    for r in &records {
        if r.text.trim().is_empty() {
            return Err(
                sfc_core::Error::Validation(format!("record `{}` has empty text", r.id)).into(),
            );
        }
        if !seen.insert(r.id.as_str()) {
            return Err(sfc_core::Error::Validation(format!("duplicate id `{}`", r.id)).into());
        }
    }
    Ok(records)
}

/// One JSON object per line, LF endings.
pub fn write_jsonl<T: Serialize, W: Write>(records: &[T], mut out: W) -> Result<()> {
    for r in records {
        let line = serde_json::to_string(r).expect("records serialize");
        writeln!(out, "{line}").map_err(|e| Error::Io {
            path: "<output>".into(),
            source: e,
        })?;
    }
    Ok(())
}

pub(crate) fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::io(path, e))
}

pub fn read_dataset(path: &Path, taxonomy: &FactorTaxonomy) -> Result<Vec<LabeledUtterance>> {
    parse_dataset(open(path)?, taxonomy).map_err(|e| in_file(path, e))
}

pub fn read_raw(path: &Path) -> Result<Vec<RawUtterance>> {
    parse_raw(open(path)?).map_err(|e| in_file(path, e))
}

pub fn write_file<T: Serialize>(path: &Path, records: &[T]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    write_jsonl(records, &mut w)?;
    w.flush().map_err(|e| Error::io(path, e))
}

fn in_file(path: &Path, e: Error) -> Error {
    match e {
        Error::Parse { line, message } => Error::Parse {
            line,
            message: format!("{}: {message}", path.display()),
        },
        e => e,
    }
}

/// A taxonomy override: `{"factors": [{"name": ..., "classes": [...]}, ...]}`.
pub fn read_taxonomy(path: &Path) -> Result<FactorTaxonomy> {
    let t: FactorTaxonomy = serde_json::from_reader(open(path)?).map_err(|e| Error::Parse {
        line: e.line(),
        message: format!("{}: {e}", path.display()),
    })?;
    t.validate()?;
    Ok(t)
}

/// A lexicon file: a JSON list of `{"pattern", "factor", "class"}`.
pub fn read_lexicon(path: &Path, taxonomy: &FactorTaxonomy) -> Result<Lexicon> {
    let entries = serde_json::from_reader(open(path)?).map_err(|e| Error::Parse {
        line: e.line(),
        message: format!("{}: {e}", path.display()),
    })?;
    Ok(Lexicon::new(entries, taxonomy)?)
}
