//! Dimensions of graph-directed Bedford–McMullen carpets.

pub mod automata;
pub mod cli;
pub mod dims;
pub mod entropy;
pub mod error;
pub mod fixtures;
mod graph;
pub mod matrix;
pub mod model;
pub mod oracle;
pub mod render;
pub mod sequences;

pub use error::{CarpetError, Result};
pub use model::{parse_system, CarpetSystem};
