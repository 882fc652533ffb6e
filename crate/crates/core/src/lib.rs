//! Finite order theory: posets, distributive lattices and their duality,
//! finite topologies with cover certificates, and a countable cut space
//! with rational-endpoint clopens.

pub mod catalog;
pub mod constructions;
pub mod cutspace;
pub mod error;
pub mod lattice;
pub mod poset;
pub mod topology;

pub use error::{Error, Result};
pub use lattice::{FiniteLattice, LatticeJson};
pub use poset::{FinitePoset, PosetJson};
