//! CSV and JSONL encodings of vector sequences.
//!
//! CSV: one vector per line, unsigned decimal coordinates separated by single
//! commas, no spaces, `\n` after every line. JSONL: one JSON array of decimal
//! strings per line.

use std::fmt::Display;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::VectorSequence;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Jsonl,
}

impl Format {
    /// Guess from a file extension; `.jsonl`/`.json` mean JSONL, anything else CSV.
    pub fn from_path(p: &Path) -> Format {
        match p.extension().and_then(|e| e.to_str()) {
            Some("jsonl") | Some("json") => Format::Jsonl,
            _ => Format::Csv,
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "jsonl" => Ok(Format::Jsonl),
            other => Err(format!("unknown format {other:?}")),
        }
    }
}

pub fn write_row<W: Write + ?Sized, T: Display>(
    w: &mut W,
    row: &[T],
    format: Format,
) -> std::io::Result<()> {
    match format {
        Format::Csv => {
            for (i, c) in row.iter().enumerate() {
                if i > 0 {
                    w.write_all(b",")?;
                }
                write!(w, "{c}")?;
            }
        }
        Format::Jsonl => {
            w.write_all(b"[")?;
            for (i, c) in row.iter().enumerate() {
                if i > 0 {
                    w.write_all(b",")?;
                }
                write!(w, "\"{c}\"")?;
            }
            w.write_all(b"]")?;
        }
    }
    w.write_all(b"\n")
}

pub fn write_sequence<W: Write + ?Sized>(
    w: &mut W,
    seq: &VectorSequence,
    format: Format,
) -> std::io::Result<()> {
    for r in seq.rows() {
        write_row(w, r, format)?;
    }
    Ok(())
}

fn parse_cell(tok: &str, line: usize) -> Result<u64> {
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse {
            line,
            msg: format!("not an unsigned decimal integer: {tok:?}"),
        });
    }
    tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("value does not fit in 64 bits: {tok}"),
    })
}

fn parse_line(text: &str, format: Format, line: usize) -> Result<Vec<u64>> {
    match format {
        Format::Csv => text.split(',').map(|t| parse_cell(t, line)).collect(),
        Format::Jsonl => {
            let toks: Vec<String> = serde_json::from_str(text).map_err(|e| Error::Parse {
                line,
                msg: e.to_string(),
            })?;
            toks.iter().map(|t| parse_cell(t, line)).collect()
        }
    }
}

/// Parses a whole document. Blank lines are only tolerated at the very end.
pub fn parse_sequence(text: &str, format: Format) -> Result<VectorSequence> {
    let body = text.trim_end_matches(['\n', '\r']);
    if body.is_empty() {
        return Err(Error::Parse {
            line: 1,
            msg: "no vectors".into(),
        });
    }
    let mut seq: Option<VectorSequence> = None;
    for (i, raw) in body.split('\n').enumerate() {
        let line = i + 1;
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        if raw.is_empty() {
            return Err(Error::Parse {
                line,
                msg: "empty line".into(),
            });
        }
        let row = parse_line(raw, format, line)?;
        let s = match &mut seq {
            Some(s) => s,
            None => seq.insert(VectorSequence::empty(row.len().max(1))?),
        };
        if row.len() != s.dim() {
            return Err(Error::Parse {
                line,
                msg: format!("expected {} coordinates, found {}", s.dim(), row.len()),
            });
        }
        s.push(&row)?;
    }
    Ok(seq.expect("at least one line"))
}

pub fn read_sequence(path: &Path, format: Option<Format>) -> Result<VectorSequence> {
    let text = std::fs::read_to_string(path)?;
    parse_sequence(&text, format.unwrap_or_else(|| Format::from_path(path)))
}
