//! Small reference arrays used throughout the tests and the CLI.

use crate::array::{Cell, PdaArray};
use crate::verify::PdaError;

fn parse_rows(rows: &[&str]) -> PdaArray {
    PdaArray::from_rows(
        rows.iter()
            .map(|r| {
                r.split_whitespace()
                    .map(|t| match t {
                        "*" => Cell::Star,
                        n => Cell::Symbol(n.parse().expect("fixture symbol")),
                    })
                    .collect()
            })
            .collect(),
    )
}

/// The 2-(4,4,2,4) base PDA with `lambda = 1`.
pub fn golden_base() -> PdaArray {
    parse_rows(&["* * 3 1", "2 * * 4", "1 3 * *", "* 2 4 *"])
}

/// The 2-(2,2,1,1) MN PDA for two users.
pub fn mn_q2() -> PdaArray {
    parse_rows(&["* 1", "1 *"])
}

/// The 1-(2,2,1,2) base PDA obtained by transforming [`mn_q2`].
pub fn mn_q2_base() -> PdaArray {
    parse_rows(&["* 2", "1 *"])
}

/// An array seeded with exactly one kind of defect, and the error it must
/// raise when checked as a base PDA with `lambda`.
#[derive(Clone, Debug)]
pub struct Negative {
    pub name: &'static str,
    pub array: PdaArray,
    pub lambda: usize,
    pub expected: PdaError,
}

pub fn negatives() -> Vec<Negative> {
    vec![
        Negative {
            name: "c1",
            array: parse_rows(&["* * 3 1", "2 * * 4", "1 3 * 2", "* 2 4 *"]),
            lambda: 1,
            expected: PdaError::C1Violation { column: 3, count: 1, expected: 2 },
        },
        Negative {
            name: "c2",
            array: parse_rows(&["* * 3 1", "2 * * 5", "1 3 * *", "* 2 5 *"]),
            lambda: 1,
            expected: PdaError::C2Violation { missing: 4 },
        },
        Negative {
            name: "c3",
            array: parse_rows(&["* * 3 1", "2 * * 4", "1 4 * *", "* 2 4 *"]),
            lambda: 1,
            expected: PdaError::C3Violation { symbol: 4, first: (2, 1), second: (3, 2) },
        },
        Negative {
            name: "c4",
            array: parse_rows(&["* 1", "1 *", "2 *", "* 2"]),
            lambda: 2,
            expected: PdaError::C4Violation { row: 2, col: 0 },
        },
        Negative {
            name: "no-phi",
            array: parse_rows(&["* 1 2", "1 * 3", "2 3 *"]),
            lambda: 1,
            expected: PdaError::NoValidPhi {
                reason: "symbol 1 has no star row among the first 3 rows".into(),
            },
        },
    ]
}
