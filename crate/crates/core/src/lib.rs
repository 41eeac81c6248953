//! Census of transitive subgroups of holomorphs of small groups, and the
//! Hopf-Galois structures and skew bracoids they classify.
//!
//! The pipeline for a degree `n`:
//!
//! 1. [`catalog::groups_of_order`] lists the groups `N` of order `n`.
//! 2. [`holomorph::HolomorphContext`] builds `Hol(N)` as permutations of `N`.
//! 3. [`transitive::enumerate_transitive_classes`] finds its transitive
//!    subgroups up to conjugacy.
//! 4. [`classify::classify_degree`] groups records from all types by
//!    stabilizer-respecting permutation isomorphism.
//! 5. [`counts::build_report_row`] turns the classes into the census columns.
//!
//! [`actions`] recovers the skew bracoids, skew braces and Yang-Baxter maps
//! behind individual records; [`degree2pq`] builds the six groups of order
//! `2pq` and checks the explicit witness subgroups; [`report`] handles
//! caching, expected values and table output.

pub mod actions;
pub mod catalog;
pub mod classify;
pub mod counts;
pub mod degree2pq;
pub mod error;
pub mod holomorph;
pub mod perm;
pub mod report;
pub mod transitive;

pub use catalog::{groups_of_order, CayleyGroup, GroupInvariants, Side};
pub use error::{Error, Result};
pub use holomorph::HolomorphContext;
pub use perm::{PermGroup, Permutation};
