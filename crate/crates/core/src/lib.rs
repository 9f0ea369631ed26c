//! Separated graphs, weighted graphs and their Leavitt path algebras:
//! constructions, normal forms, homomorphism checks and monoid computations.

pub mod cli;
pub mod constructions;
pub mod graphs;
pub mod homs;
pub mod mnlab;
pub mod monoids;
pub mod staralg;
