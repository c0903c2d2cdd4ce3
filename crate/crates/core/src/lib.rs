//! Exact almost ring theory over desk-scale perfect and perfectoid-style base rings.

pub mod almost;
pub mod base_ring;
pub mod complexes;
pub mod corpus;
pub mod algebra;
pub mod error;
pub mod fp;
pub mod k0;
pub mod linalg;
pub mod module;
pub mod monomial;
pub mod poly;
pub mod suite;
pub mod tower;

pub use error::{Error, Result};
