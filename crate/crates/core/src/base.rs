//! Base PDAs: the periodic star pattern (C4) and the uniform star-row
//! assignment (C5).

use crate::array::PdaArray;
use crate::matching::BMatching;
use crate::verify::{symbol_occurrences, verify_pda, PdaError, PdaParams};

/// A PDA certified as a base PDA for a given `lambda`.
///
/// `phi[s - 1]` is the 0-based star row assigned to symbol `s`; it always
/// lies in the first `F / lambda` rows. `partition[j]` lists, ascending, the
/// symbols assigned to row `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasePda {
    pda: PdaArray,
    params: PdaParams,
    lambda: usize,
    phi: Vec<usize>,
    partition: Vec<Vec<u32>>,
}

impl BasePda {
    pub fn pda(&self) -> &PdaArray {
        &self.pda
    }

    pub fn params(&self) -> PdaParams {
        self.params
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    /// Rows per star-pattern period, `F / lambda`.
    pub fn block_rows(&self) -> usize {
        self.params.f / self.lambda
    }

    pub fn phi(&self) -> &[usize] {
        &self.phi
    }

    pub fn partition(&self) -> &[Vec<u32>] {
        &self.partition
    }

    /// `|B_j| = lambda * S / F`.
    pub fn block_size(&self) -> usize {
        self.partition.first().map_or(0, Vec::len)
    }

    /// Position of `symbol` in the partition: `(row j, 0-based rank within B_j)`.
    pub fn locate(&self, symbol: u32) -> (usize, usize) {
        let row = self.phi[symbol as usize - 1];
        let rank = self.partition[row]
            .binary_search(&symbol)
            .expect("partition covers every symbol");
        (row, rank)
    }

    pub fn gain(&self) -> Option<usize> {
        self.params.regular_g
    }
}

/// Checks C4 for `lambda` and finds the lexicographically least valid
/// star-row assignment, or reports why none exists.
pub fn verify_base_pda(array: &PdaArray, lambda: usize) -> Result<BasePda, PdaError> {
    let params = verify_pda(array)?;
    let PdaParams { f, z, s, k, .. } = params;
    if lambda == 0 || f % lambda != 0 || z % lambda != 0 {
        return Err(PdaError::NonDivisibleLambda { lambda, rows: f, stars: z });
    }
    let block = f / lambda;

    for row in block..f {
        for col in 0..k {
            if array.is_star(row, col) != array.is_star(row % block, col) {
                return Err(PdaError::C4Violation { row, col });
            }
        }
    }

    if !(lambda * s).is_multiple_of(f) {
        return Err(PdaError::NoValidPhi {
            reason: format!("lambda*S/F = {}/{} is not an integer", lambda * s, f),
        });
    }
    let capacity = lambda * s / f;

    let occurrences = symbol_occurrences(array, s);
    let mut candidates = Vec::with_capacity(s);
    for (idx, cells) in occurrences.iter().enumerate() {
        let symbol = idx + 1;
        let rows: Vec<usize> = (0..block)
            .filter(|&r| cells.iter().all(|&(_, c)| array.is_star(r, c)))
            .collect();
        if rows.is_empty() {
            return Err(PdaError::NoValidPhi {
                reason: format!("symbol {symbol} has no star row among the first {block} rows"),
            });
        }
        candidates.push(rows);
    }

    let mut matching = BMatching::new(&candidates, block, capacity);
    let matched = matching.maximize();
    if matched < s {
        return Err(PdaError::NoValidPhi {
            reason: format!("only {matched} of {s} symbols fit with {capacity} per row"),
        });
    }
    matching.make_lexicographic();

    let phi: Vec<usize> = matching
        .assignment()
        .iter()
        .map(|a| a.expect("complete assignment"))
        .collect();
    let mut partition = vec![Vec::with_capacity(capacity); block];
    for (idx, &row) in phi.iter().enumerate() {
        partition[row].push(idx as u32 + 1);
    }

    Ok(BasePda { pda: array.clone(), params, lambda, phi, partition })
}
