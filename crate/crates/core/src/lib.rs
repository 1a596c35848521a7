//! Exact total-positivity tests for unipotent matrices, Fock–Goncharov
//! positivity of flag tuples, symmetric-power and Barbot representations,
//! and numerical limit dynamics of positive flag maps.

pub mod bench;
pub mod dynamics;
pub mod error;
pub mod flags;
pub mod format;
pub mod linalg;
pub mod positivity;
pub mod reps;
pub mod samples;
pub mod tuples;

pub use error::{Error, Result};
