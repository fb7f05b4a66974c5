//! ngtlab: pointwise verification of connections with torsion on
//! generalized Riemannian manifolds `G = g + F`.
//!
//! The crate evaluates, at concrete chart points, the connections
//! determined by a prescribed torsion and metric derivative, the
//! existence conditions for totally skew-symmetric torsion, and the
//! Einstein-metricity (NGT) connection with `T = -dF/3`, together with
//! their specializations on almost Hermitian, almost para-Hermitian,
//! almost contact and almost paracontact structures.

pub mod error;
pub mod expr;
pub mod geometry;
pub mod jet;
pub mod manifolds;
pub mod ngt;
pub mod report;
pub mod sampling;
pub mod specfile;
pub mod structures;
pub mod tensor;

pub use error::{Error, Result};
