//! Finite set-system topologies and the combinatorics around them.
//!
//! Points are subsets of a small ground set, neighbourhoods are cut out by a
//! family of "small" sets, and every claim the library makes is checkable by
//! exhaustive enumeration at the sizes it supports.

pub mod base_topology;
pub mod cantor;
pub mod core_sets;
pub mod sampling;
pub mod symmetry;
pub mod topology;
pub mod transversals;

pub use core_sets::{FamilyFlags, FamilyKind, FamilySpec, SetError, SubsetMask};
pub use topology::{FiniteTopology, PointSet};
