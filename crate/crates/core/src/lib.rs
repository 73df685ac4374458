//! Exact invariant arithmetic for Fano threefolds of Picard rank one with a
//! single node, and the pipelines that rebuild their classification tables.
//!
//! All quantities are integers handled with checked arithmetic; rationals
//! appear only inside Riemann-Roch and weighted complete intersection
//! evaluations.

pub mod ci_models;
pub mod classifier;
pub mod constraints;
pub mod contractions;
pub mod error;
pub mod fano_db;
pub mod invariants;
pub mod lattice;
pub mod table;

pub use error::{Error, Result};
