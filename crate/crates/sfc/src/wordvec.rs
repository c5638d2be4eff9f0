//! word2vec-style word-vector files.
//!
//! Both formats start with the ASCII header `"<count> <dim>\n"`. Text entries
//! are `word f1 ... fdim` per line. Binary entries are the word, one space,
//! then `dim` little-endian `f32`s, optionally followed by a newline.

use std::io::{Read, Write};

use sfc_core::WordVectorTable;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Binary,
}

impl Format {
    /// `.bin` means binary, anything else text.
    pub fn from_path(path: &std::path::Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some("bin") => Format::Binary,
            _ => Format::Text,
        }
    }
}

fn err(offset: usize, message: impl Into<String>) -> Error {
    Error::WordVectors {
        offset,
        message: message.into(),
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_while(&mut self, f: impl Fn(u8) -> bool) {
        while self.peek().is_some_and(&f) {
            self.pos += 1;
        }
    }

    // Bytes up to (not including) the first byte matching `stop`.
    fn take_until(&mut self, stop: impl Fn(u8) -> bool) -> &'a [u8] {
        let start = self.pos;
        self.skip_while(|b| !stop(b));
        &self.bytes[start..self.pos]
    }

    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8]> {
        if self.bytes.len() - self.pos < n {
            return Err(err(self.bytes.len(), format!("stream ends inside {what}")));
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }
}

fn parse_header(c: &mut Cursor) -> Result<(usize, usize)> {
    let line = c.take_until(|b| b == b'\n');
    if c.peek().is_none() {
        return Err(err(c.pos, "header is not terminated by a newline"));
    }
    c.pos += 1;
    let text = std::str::from_utf8(line).map_err(|_| err(0, "header is not ASCII"))?;
    let mut parts = text.split_ascii_whitespace();
    let (Some(count), Some(dim), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(err(
            0,
            format!("header must be `<count> <dim>`, got {text:?}"),
        ));
    };
    let count: usize = count
        .parse()
        .map_err(|_| err(0, format!("bad vocabulary count {count:?}")))?;
    let dim: i64 = dim
        .parse()
        .map_err(|_| err(0, format!("bad dimension {dim:?}")))?;
    if dim <= 0 {
        return Err(err(0, format!("dimension must be positive, got {dim}")));
    }
    Ok((count, dim as usize))
}

fn insert(table: &mut WordVectorTable, word: &[u8], vector: &[f64], offset: usize) -> Result<()> {
    let word = std::str::from_utf8(word).map_err(|_| err(offset, "word is not valid UTF-8"))?;
    if word.is_empty() {
        return Err(err(offset, "empty word"));
    }
    if let Some(j) = vector.iter().position(|v| !v.is_finite()) {
        return Err(err(
            offset,
            format!("component {j} of `{word}` is not finite"),
        ));
    }
    table
        .insert(word.to_string(), vector)
        .map_err(|e| err(offset, e.to_string()))
}

/// Reads a whole table. Offsets in errors are byte positions in the stream.
pub fn parse_word_vectors<R: Read>(mut input: R, format: Format) -> Result<WordVectorTable> {
    let mut bytes = Vec::new();
    input
        .read_to_end(&mut bytes)
        .map_err(|e| err(0, format!("read failed: {e}")))?;
    let mut c = Cursor {
        bytes: &bytes,
        pos: 0,
    };
    let (count, dim) = parse_header(&mut c)?;
    let mut table = WordVectorTable::new(dim)?;
    let mut vector = vec![0.0; dim];

    for _ in 0..count {
        match format {
            Format::Binary => {
                c.skip_while(|b| b == b'\n');
                let start = c.pos;
                let word = c.take_until(|b| b == b' ');
                if c.peek().is_none() {
                    return Err(err(
                        c.pos,
                        format!("stream ends after {} of {count} entries", table.len()),
                    ));
                }
                c.pos += 1;
                let raw = c.take(4 * dim, "a vector")?;
                for (v, chunk) in vector.iter_mut().zip(raw.chunks_exact(4)) {
                    *v = f32::from_le_bytes(chunk.try_into().unwrap()) as f64;
                }
                insert(&mut table, word, &vector, start)?;
            }
            Format::Text => {
                c.skip_while(|b| b == b'\n' || b == b'\r');
                let start = c.pos;
                if c.peek().is_none() {
                    return Err(err(
                        c.pos,
                        format!("stream ends after {} of {count} entries", table.len()),
                    ));
                }
                let line = c.take_until(|b| b == b'\n');
                let text =
                    std::str::from_utf8(line).map_err(|_| err(start, "line is not valid UTF-8"))?;
                let mut fields = text.split_ascii_whitespace();
                let word = fields.next().unwrap_or("");
                let mut n = 0;
                for f in fields {
                    if n == dim {
                        return Err(err(
                            start,
                            format!("`{word}` has more than {dim} components"),
                        ));
                    }
                    vector[n] = f
                        .parse()
                        .map_err(|_| err(start, format!("bad number {f:?} for `{word}`")))?;
                    n += 1;
                }
                if n < dim {
                    let what = if c.peek().is_none() {
                        "stream ends inside"
                    } else {
                        "short vector for"
                    };
                    return Err(err(
                        c.pos,
                        format!("{what} `{word}`: {n} of {dim} components"),
                    ));
                }
                insert(&mut table, word.as_bytes(), &vector, start)?;
            }
        }
    }
    c.skip_while(|b| b.is_ascii_whitespace());
    if c.peek().is_some() {
        return Err(err(
            c.pos,
            format!("data after the {count} declared entries"),
        ));
    }
    Ok(table)
}

/// Writes `table` in entry order. Binary output narrows to `f32`; text uses
/// the shortest representation that parses back to the same `f64`.
pub fn write_word_vectors<W: Write>(
    table: &WordVectorTable,
    format: Format,
    mut out: W,
) -> std::io::Result<()> {
    writeln!(out, "{} {}", table.len(), table.dim())?;
    for (word, v) in table.iter() {
        match format {
            Format::Text => {
                out.write_all(word.as_bytes())?;
                for x in v {
                    write!(out, " {x:?}")?;
                }
                out.write_all(b"\n")?;
            }
            Format::Binary => {
                out.write_all(word.as_bytes())?;
                out.write_all(b" ")?;
                for x in v {
                    out.write_all(&(*x as f32).to_le_bytes())?;
                }
                out.write_all(b"\n")?;
            }
        }
    }
    out.flush()
}
