//! The example systems shipped with the crate.
//!
//! * `ex_mc`: n=3, m=2, one vertex, cells (0,0), (1,1), (2,0).
//! * `ex_full`: n=3, m=2, one vertex, all six cells.
//! * `ex_pt`: n=3, m=2, one vertex, the single cell (0,0); the attractor is a point.
//! * `ex_col`: n=3, m=2, one vertex, cells (0,0), (0,1); a vertical segment.
//! * `ex_ab`: n=4, m=3, vertices a and b. `a` keeps the two right columns and
//!   bridges to `b` through (0,1); `b` keeps the left column and the top row.

use crate::model::{parse_system, CarpetSystem};

pub const EX_MC: &str = include_str!("../fixtures/ex_mc.json");
pub const EX_FULL: &str = include_str!("../fixtures/ex_full.json");
pub const EX_PT: &str = include_str!("../fixtures/ex_pt.json");
pub const EX_COL: &str = include_str!("../fixtures/ex_col.json");
pub const EX_AB: &str = include_str!("../fixtures/ex_ab.json");

pub fn ex_mc() -> CarpetSystem {
    parse_system(EX_MC).expect("bundled fixture is valid")
}

pub fn ex_full() -> CarpetSystem {
    parse_system(EX_FULL).expect("bundled fixture is valid")
}

pub fn ex_pt() -> CarpetSystem {
    parse_system(EX_PT).expect("bundled fixture is valid")
}

pub fn ex_col() -> CarpetSystem {
    parse_system(EX_COL).expect("bundled fixture is valid")
}

pub fn ex_ab() -> CarpetSystem {
    parse_system(EX_AB).expect("bundled fixture is valid")
}

/// All fixtures with their short names.
pub fn all() -> Vec<(&'static str, CarpetSystem)> {
    vec![("EX-MC", ex_mc()), ("EX-FULL", ex_full()), ("EX-PT", ex_pt()), ("EX-COL", ex_col()), ("EX-AB", ex_ab())]
}
