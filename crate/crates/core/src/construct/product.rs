use super::{check_budget, BuildOptions, ConstructError};
use crate::array::{Cell, Grid};
use crate::base::BasePda;

/// Cartesian product `A x B`: an `F1*F2 x (K1+K2)` grid whose row
/// `j2*F1 + j1` is row `j1` of `A` followed by row `j2` of `B`, so that
/// `A`'s row index varies fastest.
pub fn cartesian_product<T: Clone>(a: &Grid<T>, b: &Grid<T>) -> Grid<T> {
    let (f1, k1) = (a.rows(), a.cols());
    Grid::from_fn(f1 * b.rows(), k1 + b.cols(), |row, col| {
        let (ja, jb) = (row % f1, row / f1);
        if col < k1 {
            a.get(ja, col).clone()
        } else {
            b.get(jb, col - k1).clone()
        }
    })
}

/// The `m`-fold product `A x A x ... x A`; `m = 0` gives the empty `1 x 0`
/// identity grid.
pub fn cartesian_power<T: Clone>(a: &Grid<T>, m: usize) -> Grid<T> {
    let mut acc = Grid::new(1, 0, Vec::new());
    for _ in 0..m {
        acc = cartesian_product(&acc, a);
    }
    acc
}

/// The cache configuration array: rows `(f, eps)` in
/// `[1:F/lambda]^m x [1:lambda]^t`, lexicographic with `f` first; columns
/// `(delta, b)` with `delta` major. Entry `((f, eps), (delta, b))` is the
/// base entry `(f_delta, b)` of the first star-pattern block.
pub fn build_cache_config_array(
    base: &BasePda,
    m: usize,
    t: usize,
    opts: BuildOptions,
) -> Result<Grid<Cell>, ConstructError> {
    if t > m {
        return Err(ConstructError::InvalidRange(format!("need t <= m, got m={m}, t={t}")));
    }
    let block = base.block_rows();
    let k1 = base.params().k;
    let lam_t = (base.lambda() as u128)
        .checked_pow(t as u32)
        .ok_or_else(|| ConstructError::InvalidRange("lambda^t overflows".into()))?;
    let rows = (block as u128)
        .checked_pow(m as u32)
        .and_then(|x| x.checked_mul(lam_t))
        .ok_or_else(|| ConstructError::InvalidRange("row count overflows".into()))?;
    check_budget(rows, (m * k1) as u128, opts.cell_budget)?;

    let lam_t = lam_t as usize;
    let pda = base.pda();
    Ok(Grid::from_fn(rows as usize, m * k1, |row, col| {
        let f_index = row / lam_t;
        let (delta, b) = (col / k1, col % k1);
        // f_delta is the digit of f_index at position delta (most significant first).
        let f_delta = (f_index / block.pow((m - 1 - delta) as u32)) % block;
        pda.cell(f_delta, b)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::Cell::{Star, Symbol};
    use crate::base::verify_base_pda;
    use crate::fixtures;

    #[test]
    fn product_of_single_user_arrays() {
        let a = Grid::new(2, 1, vec![Star, Symbol(1)]);
        let p = cartesian_product(&a, &a);
        assert_eq!(
            p,
            Grid::new(4, 2, vec![Star, Star, Symbol(1), Star, Star, Symbol(1), Symbol(1), Symbol(1)])
        );
    }

    #[test]
    fn empty_factor_is_identity() {
        let a = fixtures::golden_base().grid().clone();
        let unit = Grid::new(1, 0, Vec::new());
        assert_eq!(cartesian_product(&a, &unit), a);
        assert_eq!(cartesian_product(&unit, &a), a);
    }

    #[test]
    fn three_fold_golden_product() {
        let p = fixtures::golden_base();
        let c = cartesian_power(p.grid(), 3);
        assert_eq!((c.rows(), c.cols()), (64, 12));
        // Row (f1, f2, f3) sits at (f1-1) + 4(f2-1) + 16(f3-1).
        for f1 in 0..4 {
            for f2 in 0..4 {
                for f3 in 0..4 {
                    let row = f1 + 4 * f2 + 16 * f3;
                    let f = [f1, f2, f3];
                    for (delta, &fd) in f.iter().enumerate() {
                        for b in 0..4 {
                            assert_eq!(*c.get(row, delta * 4 + b), p.cell(fd, b));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn cache_config_of_golden_base() {
        let base = verify_base_pda(&fixtures::golden_base(), 1).unwrap();
        let c = build_cache_config_array(&base, 3, 2, BuildOptions::default()).unwrap();
        assert_eq!((c.rows(), c.cols()), (64, 12));
        let stars: Vec<usize> = (0..64).filter(|&r| c.get(r, 0).is_star()).collect();
        assert_eq!(stars.len(), 32);
        // Column (1,1) caches exactly the rows with f1 in {1, 4}.
        assert!(stars.iter().all(|&r| r / 16 == 0 || r / 16 == 3));
    }

    #[test]
    fn cache_config_budget() {
        let base = verify_base_pda(&fixtures::golden_base(), 1).unwrap();
        let opts = BuildOptions { cell_budget: 100, verify: true };
        assert!(matches!(
            build_cache_config_array(&base, 3, 2, opts),
            Err(ConstructError::CellBudgetExceeded { cells: 768, budget: 100 })
        ));
    }
}
