//! Concrete array constructions: MN and transposed MN arrays, the
//! base-PDA transform, the gain-2 base family, Cartesian products and the
//! union-of-products array.

mod g2;
mod mn;
mod product;
mod transform;
mod union;

use thiserror::Error;

use crate::verify::PdaError;

pub use g2::g2_base_pda;
pub use mn::{mn_pda, transpose_pda};
pub use product::{build_cache_config_array, cartesian_power, cartesian_product};
pub use transform::transform_to_base;
pub use union::{
    construct_pm, construct_pmt, product_params, union_params, UnionCol, UnionLayout, UnionRow,
};

/// Largest array any constructor will materialize unless told otherwise.
pub const DEFAULT_CELL_BUDGET: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    pub cell_budget: usize,
    /// Run the full C1-C3 verifier on the output and compare parameters.
    pub verify: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self { cell_budget: DEFAULT_CELL_BUDGET, verify: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("invalid parameters: {0}")]
    InvalidRange(String),
    #[error("array of {cells} cells exceeds the budget of {budget}")]
    CellBudgetExceeded { cells: u128, budget: usize },
    #[error("input is not a regular PDA")]
    NotRegular,
    #[error("coded caching gain {0} is below 2")]
    GainTooSmall(usize),
    #[error("row {} has {count} stars, expected {expected}", .row + 1)]
    UnevenStarRows { row: usize, count: usize, expected: usize },
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error("constructed array failed verification: {0}")]
    VerificationFailed(String),
    #[error(transparent)]
    Pda(#[from] PdaError),
}

pub(crate) fn check_budget(rows: u128, cols: u128, budget: usize) -> Result<(), ConstructError> {
    let cells = rows.saturating_mul(cols);
    if cells > budget as u128 {
        return Err(ConstructError::CellBudgetExceeded { cells, budget });
    }
    Ok(())
}
