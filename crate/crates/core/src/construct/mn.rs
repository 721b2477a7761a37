use std::collections::HashMap;

use super::ConstructError;
use crate::array::{Cell, Grid, PdaArray};
use crate::combinatorics::subsets;
use crate::verify::verify_pda;

/// The MN array for `q` users and cache parameter `z`.
///
/// Rows are the `z`-subsets of the users in lexicographic order. Column `k`
/// holds a star in row `A` iff `k ∈ A`; otherwise it holds the 1-based
/// lexicographic rank of `A ∪ {k}` among the `(z+1)`-subsets.
pub fn mn_pda(q: usize, z: usize) -> Result<PdaArray, ConstructError> {
    if z == 0 || z >= q {
        return Err(ConstructError::InvalidRange(format!("MN array needs 1 <= z < q, got q={q}, z={z}")));
    }
    let rows = subsets(q, z);
    let rank: HashMap<Vec<usize>, u32> = subsets(q, z + 1)
        .into_iter()
        .enumerate()
        .map(|(i, s)| (s, i as u32 + 1))
        .collect();
    let grid = Grid::from_fn(rows.len(), q, |r, k| {
        let set = &rows[r];
        if set.contains(&k) {
            Cell::Star
        } else {
            let mut joined = set.clone();
            joined.push(k);
            joined.sort_unstable();
            Cell::Symbol(rank[&joined])
        }
    });
    Ok(PdaArray::new(grid))
}

/// Transposes a verified PDA, failing if the result breaks C1.
pub fn transpose_pda(array: &PdaArray) -> Result<PdaArray, ConstructError> {
    verify_pda(array)?;
    let t = array.transpose();
    verify_pda(&t)?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::verify::{PdaError, PdaParams};

    #[test]
    fn two_user_mn_is_q() {
        assert_eq!(mn_pda(2, 1).unwrap(), fixtures::mn_q2());
    }

    #[test]
    fn mn_4_2_parameters() {
        let p = verify_pda(&mn_pda(4, 2).unwrap()).unwrap();
        assert_eq!(p, PdaParams { k: 4, f: 6, z: 3, s: 4, regular_g: Some(3) });
    }

    #[test]
    fn mn_3_2_single_symbol() {
        let a = mn_pda(3, 2).unwrap();
        let p = verify_pda(&a).unwrap();
        assert_eq!(p, PdaParams { k: 3, f: 3, z: 2, s: 1, regular_g: Some(3) });
    }

    #[test]
    fn transposed_mn_parameters() {
        let t = transpose_pda(&mn_pda(4, 2).unwrap()).unwrap();
        let p = verify_pda(&t).unwrap();
        assert_eq!(p, PdaParams { k: 6, f: 4, z: 2, s: 4, regular_g: Some(3) });
    }

    #[test]
    fn transpose_of_golden_is_pda() {
        let t = transpose_pda(&fixtures::golden_base()).unwrap();
        assert_eq!(verify_pda(&t).unwrap().s, 4);
    }

    #[test]
    fn transpose_with_uneven_rows_fails() {
        // Column star counts are uniform but row counts are not.
        let a = PdaArray::from_rows(vec![
            vec![Cell::Star, Cell::Star],
            vec![Cell::Symbol(1), Cell::Symbol(2)],
        ]);
        assert!(matches!(
            transpose_pda(&a),
            Err(ConstructError::Pda(PdaError::C1Violation { .. }))
        ));
    }

    #[test]
    fn invalid_range() {
        assert!(mn_pda(3, 0).is_err());
        assert!(mn_pda(3, 3).is_err());
    }
}
