//! Lattice gauge theory on finite graphs.
//!
//! Connections on a graph are assignments of structure-group elements to
//! edges; gauge transforms assign group elements to vertices and act by
//! `h(e) ↦ g(src e)⁻¹ h(e) g(dst e)`. This crate computes holonomy groups,
//! their centralizers and the stabilizer of a connection, and classifies
//! gauge orbits by orbit type (the conjugacy class of the holonomy
//! centralizer). For finite structure groups every structural statement is
//! checked exactly against exhaustive enumeration.

pub mod graph;
pub mod groups;
pub mod lattice;
pub mod orbit;
pub mod cli;
pub mod paths;
