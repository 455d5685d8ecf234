//! Certified norm estimates, analyses of functionals and the basic inequality.

pub mod analysis;
pub mod basic;
pub mod harness;
pub mod search;

pub use basic::basic_inequality_witness;
pub use harness::{inequality_harness, HarnessCase, HarnessEntry, HarnessInstance, HarnessReport};
pub use analysis::{tree_analysis, tsirelson_analysis, NodeKind, TreeAnalysis, TreeNode};
pub use search::{
    alpha_family_search, block_domination, norm_certificate, upper_bound, witness_certificate, BlockPresentation, Budget, LowerSource, NormCertificate, SearchContext,
    UpperCandidate, UpperSource,
};
