//! Text formats for arrays: a versioned JSON document and a plain grid.
//!
//! The plain grid is one row per line, cells separated by whitespace, `*`
//! for a star. Blank lines and lines starting with `#` are ignored.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::array::{Cell, Grid, PdaArray};
use crate::base::BasePda;
use crate::verify::{verify_pda, PdaParams};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("line {line}: {reason}")]
    ParseError { line: usize, reason: String },
    #[error("unsupported format_version {found}, expected {expected}")]
    VersionMismatch { found: u32, expected: u32 },
}

fn parse_err(line: usize, reason: impl Into<String>) -> IoError {
    IoError::ParseError { line, reason: reason.into() }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseInfo {
    pub lambda: usize,
    /// Star row of each symbol, 1-based.
    pub phi: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub constructor: String,
    pub args: BTreeMap<String, String>,
}

impl Provenance {
    pub fn new<K: Into<String>, V: ToString>(constructor: &str, args: impl IntoIterator<Item = (K, V)>) -> Self {
        Self {
            constructor: constructor.to_string(),
            args: args.into_iter().map(|(k, v)| (k.into(), v.to_string())).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PdaDocument {
    pub format_version: u32,
    pub params: Option<PdaParams>,
    pub base: Option<BaseInfo>,
    pub provenance: Option<Provenance>,
    /// Row-major, one string per row.
    pub grid: Vec<String>,
    /// Space-separated vector label of each symbol, when known.
    pub symbol_labels: Option<Vec<String>>,
}

impl PdaDocument {
    /// Wraps an array; `params` is filled in when it verifies.
    pub fn from_array(array: &PdaArray, provenance: Option<Provenance>) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            params: verify_pda(array).ok(),
            base: None,
            provenance,
            grid: format_grid(array).lines().map(str::to_string).collect(),
            symbol_labels: array.labels().map(|labels| {
                labels
                    .iter()
                    .map(|l| l.iter().map(u32::to_string).collect::<Vec<_>>().join(" "))
                    .collect()
            }),
        }
    }

    pub fn from_base(base: &BasePda, provenance: Option<Provenance>) -> Self {
        let mut doc = Self::from_array(base.pda(), provenance);
        doc.base = Some(BaseInfo { lambda: base.lambda(), phi: base.phi().iter().map(|r| r + 1).collect() });
        doc
    }

    pub fn to_array(&self) -> Result<PdaArray, IoError> {
        let array = parse_grid(&self.grid.join("\n"))?;
        match &self.symbol_labels {
            None => Ok(array),
            Some(labels) => {
                let parsed = labels
                    .iter()
                    .enumerate()
                    .map(|(i, l)| {
                        l.split_whitespace()
                            .map(|x| x.parse::<u32>())
                            .collect::<Result<Vec<_>, _>>()
                            .map_err(|e| parse_err(i + 1, format!("symbol label {l:?}: {e}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(array.with_labels(parsed))
            }
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, IoError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.to_string()))?;
        let found = value
            .get("format_version")
            .and_then(serde_json::Value::as_u64)
            .ok_or_else(|| parse_err(1, "missing format_version"))?;
        if found != FORMAT_VERSION as u64 {
            return Err(IoError::VersionMismatch { found: found as u32, expected: FORMAT_VERSION });
        }
        serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.to_string()))
    }
}

/// Reads either a JSON document or a plain grid, by the first visible
/// character.
pub fn read_any(text: &str) -> Result<PdaDocument, IoError> {
    if text.trim_start().starts_with('{') {
        PdaDocument::from_json(text)
    } else {
        Ok(PdaDocument::from_array(&parse_grid(text)?, None))
    }
}

pub fn parse_grid(text: &str) -> Result<PdaArray, IoError> {
    let mut rows: Vec<Vec<Cell>> = Vec::new();
    let mut width = None;
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let row = trimmed
            .split_whitespace()
            .map(|tok| match tok {
                "*" => Ok(Cell::Star),
                _ => match tok.parse::<u32>() {
                    Ok(0) => Err(parse_err(line_no, "symbol 0 is not allowed; symbols are positive")),
                    Ok(s) => Ok(Cell::Symbol(s)),
                    Err(_) => Err(parse_err(line_no, format!("bad cell {tok:?}"))),
                },
            })
            .collect::<Result<Vec<_>, _>>()?;
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(parse_err(line_no, format!("row has {} cells, expected {w}", row.len())))
            }
            _ => {}
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(parse_err(1, "no rows"));
    }
    let cols = width.unwrap_or(0);
    let count = rows.len();
    Ok(PdaArray::new(Grid::new(count, cols, rows.into_iter().flatten().collect())))
}

/// Rows joined by newlines, cells by single spaces, with a trailing newline.
pub fn format_grid(array: &PdaArray) -> String {
    let mut out = String::new();
    for r in 0..array.rows() {
        let row: Vec<String> = array.grid().row(r).iter().map(Cell::to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
