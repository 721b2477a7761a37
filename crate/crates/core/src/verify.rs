//! Checking conditions C1-C3 and locating star rows.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::array::{Cell, PdaArray};

/// Errors raised when an array is not a (base) PDA.
///
/// Coordinates are stored 0-based; `Display` renders them 1-based to match
/// the usual matrix notation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PdaError {
    #[error("array has no rows or no columns")]
    EmptyArray,
    #[error("array contains no integer symbols")]
    NoSymbols,
    #[error("cell ({}, {}) holds symbol 0; symbols must be positive", .row + 1, .col + 1)]
    InvalidSymbol { row: usize, col: usize },
    #[error("C1 violated: column {} has {count} stars, expected {expected}", .column + 1)]
    C1Violation { column: usize, count: usize, expected: usize },
    #[error("C2 violated: symbol {missing} does not occur")]
    C2Violation { missing: u32 },
    #[error(
        "C3 violated by symbol {symbol} at ({}, {}) and ({}, {})",
        .first.0 + 1, .first.1 + 1, .second.0 + 1, .second.1 + 1
    )]
    C3Violation {
        symbol: u32,
        first: (usize, usize),
        second: (usize, usize),
    },
    #[error("symbol {0} does not occur in the array")]
    UnknownSymbol(u32),
    #[error("lambda = {lambda} does not divide both F = {rows} and Z = {stars}")]
    NonDivisibleLambda { lambda: usize, rows: usize, stars: usize },
    #[error("C4 violated at ({}, {})", .row + 1, .col + 1)]
    C4Violation { row: usize, col: usize },
    #[error("C5 violated: no valid star-row assignment ({reason})")]
    NoValidPhi { reason: String },
}

/// Parameters `(K, F, Z, S)` of a verified PDA, plus `g` when it is regular.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PdaParams {
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "F")]
    pub f: usize,
    #[serde(rename = "Z")]
    pub z: usize,
    #[serde(rename = "S")]
    pub s: usize,
    #[serde(rename = "g")]
    pub regular_g: Option<usize>,
}

/// Verifies C1-C3 and returns the array's parameters.
///
/// Symbols must already be dense (`1..=S`); a gap is a C2 violation.
pub fn verify_pda(array: &PdaArray) -> Result<PdaParams, PdaError> {
    let (rows, cols) = (array.rows(), array.cols());
    if rows == 0 || cols == 0 {
        return Err(PdaError::EmptyArray);
    }

    // C1
    let mut expected = None;
    for col in 0..cols {
        let count = (0..rows).filter(|&r| array.is_star(r, col)).count();
        match expected {
            None => expected = Some(count),
            Some(e) if e != count => {
                return Err(PdaError::C1Violation { column: col, count, expected: e })
            }
            _ => {}
        }
    }
    let z = expected.unwrap_or(0);

    // C2
    let mut counts: HashMap<u32, usize> = HashMap::new();
    for r in 0..rows {
        for c in 0..cols {
            match array.cell(r, c) {
                Cell::Symbol(0) => return Err(PdaError::InvalidSymbol { row: r, col: c }),
                Cell::Symbol(s) => *counts.entry(s).or_default() += 1,
                Cell::Star => {}
            }
        }
    }
    if counts.is_empty() {
        return Err(PdaError::NoSymbols);
    }
    let s = counts.keys().copied().max().unwrap_or(0);
    if counts.len() != s as usize {
        let missing = (1..=s).find(|id| !counts.contains_key(id)).unwrap_or(s);
        return Err(PdaError::C2Violation { missing });
    }

    // C3
    let occurrences = symbol_occurrences(array, s as usize);
    for (idx, cells) in occurrences.iter().enumerate() {
        for (i, &(j1, k1)) in cells.iter().enumerate() {
            for &(j2, k2) in &cells[i + 1..] {
                let ok = j1 != j2
                    && k1 != k2
                    && array.is_star(j1, k2)
                    && array.is_star(j2, k1);
                if !ok {
                    return Err(PdaError::C3Violation {
                        symbol: idx as u32 + 1,
                        first: (j1, k1),
                        second: (j2, k2),
                    });
                }
            }
        }
    }

    let first = occurrences[0].len();
    let regular_g = occurrences.iter().all(|o| o.len() == first).then_some(first);
    Ok(PdaParams { k: cols, f: rows, z, s: s as usize, regular_g })
}

/// Row-major occurrence lists; entry `s - 1` lists the cells holding `s`.
/// Symbols above `symbols` are ignored.
pub fn symbol_occurrences(array: &PdaArray, symbols: usize) -> Vec<Vec<(usize, usize)>> {
    let mut occ = vec![Vec::new(); symbols];
    for r in 0..array.rows() {
        for c in 0..array.cols() {
            if let Cell::Symbol(s) = array.cell(r, c) {
                if s >= 1 && (s as usize) <= symbols {
                    occ[s as usize - 1].push((r, c));
                }
            }
        }
    }
    occ
}

/// Rows in which every column containing `symbol` holds a star.
pub fn find_star_rows(array: &PdaArray, symbol: u32) -> Result<BTreeSet<usize>, PdaError> {
    let mut columns = BTreeSet::new();
    for r in 0..array.rows() {
        for c in 0..array.cols() {
            if array.cell(r, c) == Cell::Symbol(symbol) {
                columns.insert(c);
            }
        }
    }
    if columns.is_empty() {
        return Err(PdaError::UnknownSymbol(symbol));
    }
    Ok((0..array.rows())
        .filter(|&r| columns.iter().all(|&c| array.is_star(r, c)))
        .collect())
}
