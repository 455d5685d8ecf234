//! Functional trees, the grammars `W`, `W_T`, `W_T'`, `W_|||`, and the weight coding `σ`.

pub mod config;
pub mod registry;
pub mod term;
pub mod validate;

pub use config::{Mode, SpaceConfig};
pub use registry::SigmaRegistry;
pub use term::{FunctionalTerm, Grammar, Sign, Term};
pub use validate::{dual_norm_score, validate, weight_set, AverageKind, DualScore, Validator, Violation};
