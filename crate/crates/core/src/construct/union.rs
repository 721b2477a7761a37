//! The union-of-Cartesian-product array and its index bookkeeping.
//!
//! Rows are labelled `(f, eps)` with `f ∈ [1:F1/λ]^m`, `eps ∈ [1:λ]^t`, and
//! columns `(T, b)` with `T` a `t`-subset of `[1:m]` and `b ∈ [1:K1]^t`.
//! Both are enumerated lexicographically (`f` before `eps`, `T` before `b`,
//! first coordinate most significant). A cell is a star iff at least one of
//! the `t` chosen cache configurations caches that row; otherwise it carries
//! an `m`-vector of base symbols, densified in lexicographic order.

use rayon::prelude::*;

use super::{check_budget, BuildOptions, ConstructError};
use crate::array::{Cell, Grid, PdaArray};
use crate::base::BasePda;
use crate::combinatorics::{binomial, subsets};
use crate::verify::{verify_pda, PdaParams};

/// Row label; all coordinates 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnionRow {
    pub f: Vec<usize>,
    pub eps: Vec<usize>,
}

/// Column label; `set` is `T` in ascending order, all coordinates 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnionCol {
    pub set: Vec<usize>,
    pub b: Vec<usize>,
}

impl UnionCol {
    /// `|T ∩ [1:m-t+1]|`.
    pub fn w(&self, m: usize) -> usize {
        let t = self.set.len();
        self.set.iter().filter(|&&d| d <= m + 1 - t).count()
    }

    /// `[m-t+2:m] \ T` in ascending order; it always has `w - 1` elements.
    pub fn sigma(&self, m: usize) -> Vec<usize> {
        let t = self.set.len();
        (m + 2 - t..=m).filter(|i| !self.set.contains(i)).collect()
    }
}

/// Enumeration of the rows and columns of a `P_{m,t}` array.
#[derive(Clone, Debug)]
pub struct UnionLayout {
    m: usize,
    t: usize,
    block: usize,
    lambda: usize,
    k1: usize,
    subsets: Vec<Vec<usize>>,
    rows: usize,
    cols: usize,
}

impl UnionLayout {
    pub fn new(base: &BasePda, m: usize, t: usize) -> Result<Self, ConstructError> {
        if t == 0 || t > m {
            return Err(ConstructError::InvalidRange(format!("need 1 <= t <= m, got m={m}, t={t}")));
        }
        let (block, lambda, k1) = (base.block_rows(), base.lambda(), base.params().k);
        let (rows, cols) = dimensions(block, lambda, k1, m, t)
            .ok_or_else(|| ConstructError::InvalidRange("array dimensions overflow".into()))?;
        let as_usize = |x: u128| {
            usize::try_from(x).map_err(|_| ConstructError::InvalidRange("array dimensions overflow".into()))
        };
        Ok(Self {
            m,
            t,
            block,
            lambda,
            k1,
            subsets: subsets(m, t),
            rows: as_usize(rows)?,
            cols: as_usize(cols)?,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    fn eps_count(&self) -> usize {
        self.lambda.pow(self.t as u32)
    }

    pub fn row_position(&self, row: &UnionRow) -> Option<usize> {
        if row.f.len() != self.m || row.eps.len() != self.t {
            return None;
        }
        let f = digits_to_index(&row.f, self.block)?;
        let eps = digits_to_index(&row.eps, self.lambda)?;
        Some(f * self.eps_count() + eps)
    }

    pub fn col_position(&self, col: &UnionCol) -> Option<usize> {
        if col.b.len() != self.t {
            return None;
        }
        let set: Vec<usize> = col.set.iter().map(|&d| d.checked_sub(1)).collect::<Option<_>>()?;
        let rank = self.subsets.iter().position(|s| *s == set)?;
        let b = digits_to_index(&col.b, self.k1)?;
        Some(rank * self.k1.pow(self.t as u32) + b)
    }

    pub fn row_at(&self, pos: usize) -> UnionRow {
        let eps_count = self.eps_count();
        UnionRow {
            f: index_to_digits(pos / eps_count, self.block, self.m),
            eps: index_to_digits(pos % eps_count, self.lambda, self.t),
        }
    }

    pub fn col_at(&self, pos: usize) -> UnionCol {
        let per_set = self.k1.pow(self.t as u32);
        UnionCol {
            set: self.subsets[pos / per_set].iter().map(|d| d + 1).collect(),
            b: index_to_digits(pos % per_set, self.k1, self.t),
        }
    }
}

/// 1-based digits, most significant first.
fn digits_to_index(digits: &[usize], radix: usize) -> Option<usize> {
    digits.iter().try_fold(0usize, |acc, &d| {
        (1..=radix).contains(&d).then(|| acc * radix + d - 1)
    })
}

fn index_to_digits(mut index: usize, radix: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = index % radix + 1;
        index /= radix;
    }
    out
}

fn dimensions(block: usize, lambda: usize, k1: usize, m: usize, t: usize) -> Option<(u128, u128)> {
    let rows = (lambda as u128)
        .checked_pow(t as u32)?
        .checked_mul((block as u128).checked_pow(m as u32)?)?;
    let cols = binomial(m as u64, t as u64)?.checked_mul((k1 as u128).checked_pow(t as u32)?)?;
    Some((rows, cols))
}

/// Parameters of `P_{m,t}` predicted from the base:
/// `K = C(m,t) K1^t`, `F = λ^t (F1/λ)^m`,
/// `Z = F - λ^t (F1/λ)^(m-t) ((F1 - Z1)/λ)^t`, `S = (F1/λ)^(m-t) S1^t`,
/// `g = C(m,t) g1^t`.
pub fn union_params(base: PdaParams, lambda: usize, m: usize, t: usize) -> Option<PdaParams> {
    if t == 0 || t > m || lambda == 0 || !base.f.is_multiple_of(lambda) || !base.z.is_multiple_of(lambda) {
        return None;
    }
    let block = (base.f / lambda) as u128;
    let lam = lambda as u128;
    let (t32, rest) = (t as u32, (m - t) as u32);
    let f = lam.checked_pow(t32)?.checked_mul(block.checked_pow(m as u32)?)?;
    let nonstar = lam
        .checked_pow(t32)?
        .checked_mul(block.checked_pow(rest)?)?
        .checked_mul((((base.f - base.z) / lambda) as u128).checked_pow(t32)?)?;
    let s = block.checked_pow(rest)?.checked_mul((base.s as u128).checked_pow(t32)?)?;
    let choose = binomial(m as u64, t as u64)?;
    let k = choose.checked_mul((base.k as u128).checked_pow(t32)?)?;
    let g = match base.regular_g {
        Some(g1) => Some(usize::try_from(choose.checked_mul((g1 as u128).checked_pow(t32)?)?).ok()?),
        None => None,
    };
    Some(PdaParams {
        k: usize::try_from(k).ok()?,
        f: usize::try_from(f).ok()?,
        z: usize::try_from(f - nonstar).ok()?,
        s: usize::try_from(s).ok()?,
        regular_g: g,
    })
}

/// Parameters of the `m`-fold product PDA `P_m`:
/// `(m K1, λ (F1/λ)^m, Z1 (F1/λ)^(m-1), S1 (F1/λ)^(m-1))`, gain `m g1`.
pub fn product_params(base: PdaParams, lambda: usize, m: usize) -> Option<PdaParams> {
    if m == 0 || lambda == 0 || !base.f.is_multiple_of(lambda) {
        return None;
    }
    let block = base.f / lambda;
    let pow = |e: usize| block.checked_pow(e as u32);
    Some(PdaParams {
        k: m.checked_mul(base.k)?,
        f: lambda.checked_mul(pow(m)?)?,
        z: base.z.checked_mul(pow(m - 1)?)?,
        s: base.s.checked_mul(pow(m - 1)?)?,
        regular_g: match base.regular_g {
            Some(g) => Some(m.checked_mul(g)?),
            None => None,
        },
    })
}

struct ColumnPlan {
    /// 0-based group indices `delta_1 < ... < delta_t`.
    delta: Vec<usize>,
    /// 0-based base columns `b_h`.
    b: Vec<usize>,
    w: usize,
    /// 0-based `sigma_1 < ... < sigma_{w-1}`.
    sigma: Vec<usize>,
}

struct Filler<'a> {
    base: &'a BasePda,
    m: usize,
    t: usize,
    block: usize,
    symbols: u64,
    /// `(l, mu)` per base symbol, both 0-based.
    location: Vec<(usize, usize)>,
}

impl Filler<'_> {
    /// Key of the symbol vector at `(f, eps)` for the given column, or
    /// `None` if the cell is a star. `f` and `eps` are 0-based digits.
    fn key(&self, f: &[usize], eps: &[usize], col: &ColumnPlan, mu: &mut [usize], l: &mut [usize]) -> Option<u64> {
        let pda = self.base.pda();
        for h in 0..self.t {
            if pda.is_star(f[col.delta[h]], col.b[h]) {
                return None;
            }
        }
        for h in 0..self.t {
            let row = f[col.delta[h]] + eps[h] * self.block;
            let s = pda.cell(row, col.b[h]).symbol().expect("star pattern repeats across blocks");
            (l[h], mu[h]) = self.location[s as usize - 1];
        }
        let part = self.base.partition();
        let mut key = 0u64;
        let mut h_delta = 0;
        let mut h_sigma = 0;
        for i in 0..self.m {
            let e = if h_delta < self.t && col.delta[h_delta] == i {
                let h = h_delta;
                h_delta += 1;
                if h < col.w {
                    part[l[h]][mu[0]]
                } else {
                    part[l[h]][mu[h]]
                }
            } else if h_sigma < col.sigma.len() && col.sigma[h_sigma] == i {
                let h = h_sigma;
                h_sigma += 1;
                part[f[i]][mu[h + 1]]
            } else {
                part[f[i]][mu[0]]
            };
            key = key * self.symbols + (e as u64 - 1);
        }
        Some(key)
    }
}

/// Builds `P_{m,t}` from a base PDA.
///
/// With `opts.verify` set, the result is run through the C1-C3 verifier and
/// its parameters compared against [`union_params`].
pub fn construct_pmt(
    base: &BasePda,
    m: usize,
    t: usize,
    opts: BuildOptions,
) -> Result<PdaArray, ConstructError> {
    if t == 0 || t > m {
        return Err(ConstructError::InvalidRange(format!("need 1 <= t <= m, got m={m}, t={t}")));
    }
    let params = base.params();
    let (rows, cols) = dimensions(base.block_rows(), base.lambda(), params.k, m, t)
        .ok_or(ConstructError::CellBudgetExceeded { cells: u128::MAX, budget: opts.cell_budget })?;
    check_budget(rows, cols, opts.cell_budget)?;
    let layout = UnionLayout::new(base, m, t)?;

    let symbols = params.s as u64;
    if symbols.checked_pow(m as u32).is_none_or(|x| x == u64::MAX) {
        return Err(ConstructError::InvalidRange(format!("symbol space {symbols}^{m} too large")));
    }
    let filler = Filler {
        base,
        m,
        t,
        block: base.block_rows(),
        symbols,
        location: (1..=params.s as u32).map(|s| base.locate(s)).collect(),
    };
    let plans: Vec<ColumnPlan> = (0..layout.cols())
        .map(|c| {
            let col = layout.col_at(c);
            ColumnPlan {
                delta: col.set.iter().map(|d| d - 1).collect(),
                b: col.b.iter().map(|b| b - 1).collect(),
                w: col.w(m),
                sigma: col.sigma(m).iter().map(|s| s - 1).collect(),
            }
        })
        .collect();

    const STAR: u64 = u64::MAX;
    let mut keys = vec![STAR; layout.rows() * layout.cols()];
    keys.par_chunks_mut(layout.cols()).enumerate().for_each(|(r, out)| {
        let label = layout.row_at(r);
        let f: Vec<usize> = label.f.iter().map(|x| x - 1).collect();
        let eps: Vec<usize> = label.eps.iter().map(|x| x - 1).collect();
        let (mut mu, mut l) = (vec![0; t], vec![0; t]);
        for (slot, plan) in out.iter_mut().zip(&plans) {
            if let Some(k) = filler.key(&f, &eps, plan, &mut mu, &mut l) {
                *slot = k;
            }
        }
    });

    let mut distinct: Vec<u64> = keys.par_iter().copied().filter(|&k| k != STAR).collect();
    distinct.par_sort_unstable();
    distinct.dedup();
    let cells: Vec<Cell> = keys
        .par_iter()
        .map(|&k| {
            if k == STAR {
                Cell::Star
            } else {
                Cell::Symbol(distinct.binary_search(&k).expect("collected key") as u32 + 1)
            }
        })
        .collect();
    drop(keys);
    let labels = distinct
        .iter()
        .map(|&k| {
            index_to_digits(k as usize, symbols as usize, m)
                .into_iter()
                .map(|d| d as u32)
                .collect()
        })
        .collect();
    let array = PdaArray::new(Grid::new(layout.rows(), layout.cols(), cells)).with_labels(labels);

    if opts.verify {
        let got = verify_pda(&array).map_err(|e| ConstructError::VerificationFailed(e.to_string()))?;
        let want = union_params(params, base.lambda(), m, t)
            .ok_or_else(|| ConstructError::VerificationFailed("parameter overflow".into()))?;
        if got != want {
            return Err(ConstructError::VerificationFailed(format!(
                "parameters {got:?} differ from predicted {want:?}"
            )));
        }
    }
    Ok(array)
}

/// `P_m`, the `t = 1` case, checked against the product-PDA parameters.
pub fn construct_pm(base: &BasePda, m: usize, opts: BuildOptions) -> Result<PdaArray, ConstructError> {
    let array = construct_pmt(base, m, 1, opts)?;
    if opts.verify {
        let got = verify_pda(&array).map_err(|e| ConstructError::VerificationFailed(e.to_string()))?;
        let want = product_params(base.params(), base.lambda(), m)
            .ok_or_else(|| ConstructError::VerificationFailed("parameter overflow".into()))?;
        if got != want {
            return Err(ConstructError::VerificationFailed(format!(
                "parameters {got:?} differ from the product-PDA tuple {want:?}"
            )));
        }
    }
    Ok(array)
}
