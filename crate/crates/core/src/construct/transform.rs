use super::ConstructError;
use crate::array::{densify, Grid, PdaArray};
use crate::base::{verify_base_pda, BasePda};
use crate::combinatorics::residue;
use crate::verify::{symbol_occurrences, verify_pda};

/// Turns a `g`-regular PDA with uniform row star counts into a base PDA
/// with `lambda = g - 1`.
///
/// The array is stacked `g - 1` times. In copy `e` (1-based), the `v`-th
/// row-major occurrence of symbol `s` becomes the pair `(s, <v + e>_g)`, so
/// each pair `(s, u)` appears once per copy and skips occurrence `u`, whose
/// row is then a star row for it.
pub fn transform_to_base(array: &PdaArray) -> Result<BasePda, ConstructError> {
    let params = verify_pda(array)?;
    let g = params.regular_g.ok_or(ConstructError::NotRegular)?;
    if g < 2 {
        return Err(ConstructError::GainTooSmall(g));
    }
    let (f, k) = (params.f, params.k);
    let row_stars = |r: usize| (0..k).filter(|&c| array.is_star(r, c)).count();
    let expected = row_stars(0);
    if let Some(row) = (1..f).find(|&r| row_stars(r) != expected) {
        return Err(ConstructError::UnevenStarRows { row, count: row_stars(row), expected });
    }

    let mut occurrence = vec![0usize; f * k];
    for cells in symbol_occurrences(array, params.s) {
        for (v, (r, c)) in cells.into_iter().enumerate() {
            occurrence[r * k + c] = v + 1;
        }
    }

    let copies = g - 1;
    let stacked = Grid::from_fn(copies * f, k, |row, col| {
        let (copy, r) = (row / f + 1, row % f);
        array
            .cell(r, col)
            .symbol()
            .map(|s| (s, residue(occurrence[r * k + col] + copy, g) as u32))
    });
    let out = densify(&stacked, |&(s, u)| vec![s, u]);
    verify_base_pda(&out, copies).map_err(|e| ConstructError::VerificationFailed(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::Cell;
    use crate::construct::mn_pda;
    use crate::fixtures;
    use crate::verify::PdaParams;

    #[test]
    fn two_user_mn_becomes_p() {
        let b = transform_to_base(&fixtures::mn_q2()).unwrap();
        assert_eq!(b.pda().clone().without_labels(), fixtures::mn_q2_base());
        assert_eq!(b.lambda(), 1);
    }

    #[test]
    fn mn_4_2_parameters() {
        let b = transform_to_base(&mn_pda(4, 2).unwrap()).unwrap();
        assert_eq!(b.lambda(), 2);
        assert_eq!(b.params(), PdaParams { k: 4, f: 12, z: 6, s: 12, regular_g: Some(2) });
    }

    #[test]
    fn golden_base_transform() {
        // g = 2 gives a single copy with pair symbols.
        let b = transform_to_base(&fixtures::golden_base()).unwrap();
        assert_eq!(b.params().s, 8);
        assert_eq!(b.gain(), Some(1));
    }

    #[test]
    fn irregular_input_rejected() {
        let a = PdaArray::from_rows(vec![
            vec![Cell::Star, Cell::Symbol(1), Cell::Symbol(2)],
            vec![Cell::Symbol(1), Cell::Star, Cell::Symbol(3)],
        ]);
        // Column 3 has no stars; not a PDA at all.
        assert!(transform_to_base(&a).is_err());
        let b = PdaArray::from_rows(vec![vec![Cell::Star], vec![Cell::Symbol(1)]]);
        assert_eq!(transform_to_base(&b), Err(ConstructError::GainTooSmall(1)));
    }
}
