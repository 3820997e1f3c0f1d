//! Exact certificates for the Lipschitz-like (Aubin) property of solution
//! maps of affine variational inequalities and linear complementarity
//! problems, relative to a polyhedral set of parameters.

pub mod avi;
pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod lcp;
pub mod linalg;
pub mod oracle;
pub mod report;

pub use error::{Error, Result};
pub use geometry::{Cone, PolyhedronH};
pub use lcp::{IndexCombination, LipschitzCertificate, Q0Status, SolutionSet};
pub use linalg::{RMatrix, RVector, Rational};
