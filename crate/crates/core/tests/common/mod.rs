#![allow(dead_code)]

use itertools::Itertools;
use pdakit::{Cell, PdaArray};

/// Literal reading of C1-C3.
pub fn is_pda_by_definition(a: &PdaArray) -> bool {
    let stars: Vec<usize> = (0..a.cols()).map(|k| (0..a.rows()).filter(|&j| a.is_star(j, k)).count()).collect();
    if stars.iter().any(|&z| z != stars[0]) {
        return false;
    }
    let mut cells: Vec<(usize, usize, u32)> = Vec::new();
    for j in 0..a.rows() {
        for k in 0..a.cols() {
            if let Cell::Symbol(s) = a.cell(j, k) {
                cells.push((j, k, s));
            }
        }
    }
    let max = cells.iter().map(|c| c.2).max().unwrap_or(0);
    if max == 0 || (1..=max).any(|s| !cells.iter().any(|c| c.2 == s)) {
        return false;
    }
    for (x, y) in cells.iter().tuple_combinations() {
        if x.2 == y.2 && (x.0 == y.0 || x.1 == y.1 || !a.is_star(x.0, y.1) || !a.is_star(y.0, x.1)) {
            return false;
        }
    }
    true
}

pub fn stars_in_row(a: &PdaArray, j: usize) -> usize {
    (0..a.cols()).filter(|&k| a.is_star(j, k)).count()
}
