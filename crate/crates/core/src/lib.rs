//! Exact tools for a Schreier-type hereditarily indecomposable Banach space.

pub mod error;
pub mod constructions;
pub mod corpus;
pub mod functionals;
pub mod normsearch;
pub mod num;
pub mod scc;
pub mod schreier;
pub mod suites;
pub mod tsirelson;
pub mod vectors;

pub use error::{Error, Result};
