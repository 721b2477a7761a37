//! Placement delivery arrays for coded caching.

pub mod array;
pub mod base;
pub mod combinatorics;
pub mod construct;
pub mod fixtures;
pub mod io;
pub mod iso;
pub mod matching;
pub mod schemes;
pub mod sim;
pub mod verify;

pub use array::{Cell, Grid, PdaArray};
pub use array::{densify, relabel_symbols};
pub use base::{verify_base_pda, BasePda};
pub use construct::{BuildOptions, ConstructError};
pub use iso::{is_isomorphic, is_isomorphic_within, IsoError};
pub use verify::{find_star_rows, verify_pda, PdaError, PdaParams};
