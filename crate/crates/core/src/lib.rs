//! Sums of even powers of binary and ternary forms: exact polynomial and
//! linear algebra, apolarity, the dual slice of the cone of sums of fourth
//! powers of binary quadratics, a dense semidefinite solver, boundary and face
//! analysis, decomposition search and the length constructions.

pub mod error;
pub mod faces;
pub mod apolar;
pub mod boundary;
pub mod catalog;
pub mod constructions;
pub mod decompose;
pub mod dualcone;
pub mod forms;
pub mod json;
pub mod linalg;
pub mod parse;
pub mod scalar;
pub mod sdp;

pub use error::{Error, Result};
