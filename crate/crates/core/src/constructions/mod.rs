//! Executable building blocks: `c_0` blocks, `(C, θ, n)` and exact vectors,
//! exact pairs, dependent sequences and the index witness searches.
//!
//! Builders never assert the defining clauses of what they build. Every
//! record carries a list of clause checks computed by separate code that only
//! looks at the finished data.

pub mod blocks;
pub mod dependent;
pub mod index;
pub mod pair;
pub mod vector;

use serde::{Deserialize, Serialize};

pub use blocks::{build_c0_blocks, build_c0_blocks_from, C0Blocks};
pub use dependent::{build_dependent_sequence, check_dependent_sequence, hi_demo, DependentSequence, HiDemo};
pub use index::{alpha_index_witness, beta_index_witness, IndexWitness};
pub use pair::{build_exact_pair, check_exact_pair, ExactPair, PairKind};
pub use vector::{build_ctn_vector, build_exact_vector, check_vector, CtnSpec, ExactVectorRecord};

/// Outcome of checking one defining clause.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClauseStatus {
    Holds,
    Fails,
    /// Neither the clause nor its negation is certified by the available bounds.
    Unverified,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseCheck {
    pub clause: String,
    pub status: ClauseStatus,
    pub detail: String,
}

impl ClauseCheck {
    pub fn new(clause: &str, status: ClauseStatus, detail: impl Into<String>) -> Self {
        ClauseCheck { clause: clause.to_string(), status, detail: detail.into() }
    }

    pub fn exact(clause: &str, holds: bool, detail: impl Into<String>) -> Self {
        Self::new(clause, if holds { ClauseStatus::Holds } else { ClauseStatus::Fails }, detail)
    }

    pub fn holds(&self) -> bool {
        self.status == ClauseStatus::Holds
    }
}

/// Status of the named clause, if present.
pub fn clause_status(checks: &[ClauseCheck], clause: &str) -> Option<ClauseStatus> {
    checks.iter().find(|c| c.clause == clause).map(|c| c.status)
}
