//! Exact local profiles of trees: free-tree enumeration, subtree counting,
//! the gluing and millipede constructions, and exact checks of finite-tree
//! inequalities on path, star, and Y-shape densities.

pub mod catalog;
pub mod census;
pub mod cli;
pub mod config;
pub mod counting;
pub mod error;
pub mod exact;
pub mod generators;
pub mod region;
pub mod report;
pub mod suite;
pub mod tree;

pub use catalog::{catalog_count, enumerate_trees, TreeCatalog};
pub use counting::{count_all, count_copies, profile, CountsRecord, ProfileVector};
pub use error::{Error, Result};
pub use report::VerificationReport;
pub use tree::{canonical_code, is_isomorphic, max_degree, CanonicalCode, Tree, TreeData};
