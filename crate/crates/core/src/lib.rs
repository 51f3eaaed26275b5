//! Exact-rational toolkit for finitely generated subsemigroups of the group
//! of unitriangular rational matrices: decide whether the identity matrix is
//! reachable and whether the semigroup is a group, by computing the subset of
//! generators invertible inside the semigroup. The same exact machinery
//! drives verifiable bracket-identity checks for the series terms of the
//! logarithm of a product, and a rewriting engine over set partitions with a
//! randomized certificate search for higher nilpotency classes.
//!
//! Everything is computed in exact rational arithmetic; no floating point is
//! used anywhere.

pub mod bch;
pub mod cones;
pub mod error;
pub mod exactq;
pub mod invset;
pub mod liealg;
pub mod partitions;
pub mod rewrite;
pub mod sample;
pub mod utgroup;
pub mod verify;

pub use error::Error;
pub use exactq::{QMatrix, Rat, Subspace};
pub use invset::{GeneratorSet, InvSetOptions, InvSetResult};
pub use utgroup::{LieElement, UTMatrix};
