//! Transformation semigroups: enumeration, Green's D-classes, generating sets
//! and ranks, plus exact and sampled probabilities that random
//! transformations generate a ubiquitous semigroup.

pub mod asymptotics;
pub mod error;
pub mod exact;
pub mod gensets;
pub mod greens;
pub mod montecarlo;
pub mod semigroup;
mod subset;
pub mod table1;
pub mod transform;

pub use error::{Error, Result};
pub use greens::{d_classes, DClassDecomposition, Direction};
pub use semigroup::SemigroupTable;
pub use transform::Transformation;
