//! Exact lattice and elliptic-fibration arithmetic for K3 surfaces carrying a
//! symplectic automorphism of order 3.
//!
//! Conventions: vectors are rows; a lattice is its integral symmetric Gram
//! matrix; isometries act on the right, `v ↦ v·M`.

pub mod catalog;
pub mod equation;
pub mod exact;
pub mod fibration;
pub mod io;
pub mod lattice;
pub mod structures;
