//! Level-d mapping class groups of nonorientable surfaces: homology
//! actions, word families, finite-group tooling and free-group checks.

pub mod homology;
mod automaton;
pub mod finitegrp;
pub mod ledger;
pub mod linalg;
pub mod pi1free;
pub mod words;
