//! Convex recovery of planted cliques and bicliques: instance generators, a
//! nuclear-norm solver, dual certificates, random-matrix checks and an exact
//! combinatorial oracle.

pub mod certificate;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod generators;
pub mod matrix;
pub mod oracle;
pub mod rmt;
pub mod solver;

pub use error::{Error, Result};
