//! Exact subgroup commutativity degrees of small finite groups.
//!
//! Groups are explicit multiplication tables ([`group`]); their complete
//! subgroup lattices ([`lattice`]) feed the exact pair counts behind `sd(G)`
//! and the sectional minimum `sd*(G)` ([`degrees`]). Closed forms for the
//! dihedral, extraspecial and minimal Schmidt families live in
//! [`closed_forms`], the Schmidt constructions in [`schmidt`], and catalog
//! scanning in [`scan`].

pub mod bitset;
pub mod closed_forms;
pub mod degrees;
pub mod error;
pub mod group;
pub mod lattice;
pub mod primes;
pub mod rational;
pub mod scan;
pub mod schmidt;

pub use error::{Error, Result};
pub use group::{Group, GroupSpec, PermutationGenSet};
pub use lattice::{Subgroup, SubgroupLattice};
pub use rational::ExactRational;
