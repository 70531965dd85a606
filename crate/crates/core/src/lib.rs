//! Exact combinatorics of Minkowski sums of standard simplices.
//!
//! A family `F = (F_1, ..., F_k)` of nonempty subsets of `[r]` defines the
//! polytope `P_F = Δ_{F_1} + ... + Δ_{F_k}`. This crate enumerates its
//! vertices through rep-functions, builds its 1-skeleton with an exact
//! rational LP certificate per edge, counts faces through ordered
//! partitions, and provides the closed-form counts and degree bounds that
//! hold for these polytopes together with brute-force checks of each.
//!
//! Ground elements are 1-based throughout.

pub mod corpus;
pub mod error;
pub mod exactlp;
pub mod family;
pub mod formulas;
pub mod master;
pub mod repfn;
pub mod skeleton;
pub mod verify;

pub use error::{Error, Result};
pub use exactlp::Rational;
pub use family::{NeighborhoodSignature, OrderedPartition, SimplexFamily};
pub use repfn::{LatticePoint, MultiplicityMap, RepFunction};
pub use skeleton::{FPolynomial, SkeletonGraph};
