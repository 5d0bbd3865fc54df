//! Classical and quantum Steenrod squares on graded GF(2) cohomology rings
//! given by generators and relations.

pub mod adem;
pub mod builtins;
pub mod cli;
pub mod gf2_poly;
pub mod gf2vec;
pub mod linalg;
pub mod manifold;
pub mod qsteenrod;
pub mod quantum_model;
pub mod ring_model;
pub mod steenrod;
