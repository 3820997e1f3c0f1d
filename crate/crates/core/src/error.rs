use thiserror::Error;

use crate::linalg::{fmt_vector, RVector};

/// Errors surfaced by the certification routines.
///
/// The `Display` text of every variant starts with the error name so the
/// command line front end can report it verbatim.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("MembershipError: {0}")]
    Membership(String),

    #[error("DirectionError: {0}")]
    Direction(String),

    #[error("DimensionError: {0}")]
    Dimension(String),

    #[error("CqViolation: basic constraint qualification fails along u* = {}", fmt_vector(.witness))]
    CqViolation { witness: RVector },

    #[error("SignError: {0}")]
    Sign(String),

    #[error("NotQ0Error: matrix is not Q0{}", .witness.as_ref().map(|q| format!(" (feasible but unsolvable q = {})", fmt_vector(q))).unwrap_or_default())]
    NotQ0 { witness: Option<RVector> },

    #[error("NotCertifiedError: Lipschitz-like certificate is {0}")]
    NotCertified(&'static str),

    #[error("EmptyRegionError: {0}")]
    EmptyRegion(String),

    /// A certificate failed its own exact re-verification.
    #[error("InternalInvariantError: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
