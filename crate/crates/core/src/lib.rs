//! Decision procedure and enumerator for proper holomorphic mappings
//! between two-dimensional pseudoconvex Reinhardt domains whose
//! logarithmic image is a strip or half-plane, with exact
//! quadratic-irrational arithmetic and a floating-point verification
//! engine.

pub mod domains;
pub mod field;
pub mod lattice;
pub mod solver;
pub mod verify;

pub mod cli;
