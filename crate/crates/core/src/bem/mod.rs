//! Axisymmetric boundary-element solver for bodies of revolution.

pub mod kernel;
pub mod mesh;
pub mod solver;
pub mod rotation;
pub mod oracle;
