//! Fatgraphs, the combinatorial moduli space of curves with one boundary,
//! and exact evaluation of tautological integrals over the hyperelliptic
//! locus.

pub mod enumeration;
pub mod error;
pub mod fatgraph;
pub mod hyperelliptic;
pub mod integrals;
pub mod io;
pub mod kontsevich;
pub mod rational;
pub mod store;
pub mod surgery;
pub mod symmetry;
pub mod trees;

pub use error::{Error, Result};
pub use fatgraph::{BoundaryCycles, Fatgraph, GraphType, Permutation, VertexFlag};
pub use rational::Rational;
pub use symmetry::{automorphisms, canonical_form, fixed_cells, is_hyperelliptic, CanonicalKey, FixedCells};
