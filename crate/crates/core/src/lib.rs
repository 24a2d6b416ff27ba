//! Exact decision procedures and canonical-form certificates for linear maps
//! between matrix algebras that preserve zero products and related
//! multiplicative relations.

pub mod error;
pub mod fixtures;
pub mod jordan;
pub mod linalg;
pub mod linmap;
pub mod nilspace;
pub mod par;
pub mod rng;
pub mod structure;
pub mod verify;

pub use error::Error;
pub use linmap::LinMap;
pub use verify::{Property, Verdict, Witness};
