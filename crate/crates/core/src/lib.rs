//! Exact computations in the block theory of small finite group algebras:
//! block decompositions, source algebras, fusion systems, bar-complex group
//! cohomology, Hochschild cohomology, and the transfer maps connecting them.
//!
//! Everything is computed over explicit finite fields with deterministic
//! pivoting and tie-breaking, so every run of every routine produces
//! identical output.

#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod blocks;
pub mod budget;
pub mod error;
pub mod field;
pub mod group;
pub mod groupcoh;
pub mod hochschild;
pub mod matrix;
pub mod poly;
pub mod report;
pub mod rng;
pub mod sasaki;

pub use error::{Error, Result};
pub use field::{Field, Scalar};
pub use group::{make_group, FiniteGroup, Subgroup};
