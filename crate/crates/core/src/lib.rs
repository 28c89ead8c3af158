//! Exact arithmetic for admissible pairings on hyperelliptic curves:
//! symmetric roots, residue-class trees, metrized reduction graphs and the
//! invariants built from them.

pub mod cli;
pub mod clustertree;
pub mod error;
pub mod invariants;
pub mod metgraph;
pub mod numeric;
pub mod symroots;

pub use error::{Error, Result};
