use super::ConstructError;
use crate::array::{densify, Grid};
use crate::base::{verify_base_pda, BasePda};

/// A 2-regular `(q^2, 2q, 2, (q-1)q^2)` base PDA with `lambda = 1`.
///
/// Rows `0..q` form the top block and rows `q..2q` the bottom block.
/// Column `(a, b)` (index `a*q + b`) has its stars in top row `a` and bottom
/// row `b`. A top cell `(a', (a, b))` pairs with `(a, (a', b))`, which share
/// star row `q + b`; a bottom cell `(q + b', (a, b))` pairs with
/// `(q + b, (a, b'))`, which share star row `a`.
pub fn g2_base_pda(q: usize) -> Result<BasePda, ConstructError> {
    if q < 2 {
        return Err(ConstructError::InvalidRange(format!("gain-2 base needs q >= 2, got {q}")));
    }
    let grid = Grid::from_fn(2 * q, q * q, |row, col| {
        let (a, b) = (col / q, col % q);
        if row < q {
            let top = row;
            (top != a).then(|| [0, top.min(a), top.max(a), b])
        } else {
            let bottom = row - q;
            (bottom != b).then(|| [1, a, bottom.min(b), bottom.max(b)])
        }
    });
    let array = densify(&grid, |key| key.iter().map(|&x| x as u32 + 1).collect());
    verify_base_pda(&array, 1).map_err(|e| ConstructError::ConstructionFailed(e.to_string()))
}
