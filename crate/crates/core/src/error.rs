//! Error types shared across the crate.
//!
//! Negative mathematical verdicts (a coalgebra that is not a sheaf coalgebra,
//! an algebroid that fails an axiom) are *results* and live in report structs;
//! the errors here are structural defects, violated preconditions, and the
//! two diagnostic failure modes of the spectral reconstruction.

use thiserror::Error;

use crate::base::Point;

/// Why the grouplike solver cannot enumerate `G(C_x)` over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolverObstruction {
    /// The dual algebra is not commutative (the local coalgebra is not
    /// cocommutative), so simultaneous eigensplitting does not apply.
    NoncommutativeDual,
    /// The dual algebra is not associative (the local coalgebra is not
    /// coassociative); characters are not well-defined.
    NonassociativeDual,
    /// A multiplication operator has a non-squarefree minimal polynomial:
    /// the dual algebra has nilpotents and is not semisimple.
    NotSemisimple,
    /// The minimal polynomial of a multiplication operator has an
    /// irreducible factor of degree > 1: characters would need a field
    /// extension of the rationals.
    NotSplit,
}

impl std::fmt::Display for SolverObstruction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SolverObstruction::NoncommutativeDual => write!(f, "dual algebra is not commutative"),
            SolverObstruction::NonassociativeDual => write!(f, "dual algebra is not associative"),
            SolverObstruction::NotSemisimple => write!(f, "dual algebra is not semisimple"),
            SolverObstruction::NotSplit => write!(f, "dual algebra does not split over the rationals"),
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// Malformed input: mismatched base sets, unknown ids, duplicate ids,
    /// grade-incoherent tables, and the like.
    #[error("structural error: {0}")]
    Structural(String),

    /// An operation was called outside its stated precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The grouplike solver is outside its applicability class. Carries the
    /// offending point when the failure arose from localizing at a point.
    #[error("grouplike solver inapplicable{}: {reason}", match .point { Some(p) => format!(" at point {p}"), None => String::new() })]
    SolverInapplicable {
        point: Option<Point>,
        reason: SolverObstruction,
    },

    /// The spectral construction produced data that is not a groupoid
    /// (products of arrows that are not arrows, translations that are not
    /// indicators). The input is a legal Hopf algebroid outside the
    /// reconstructible class.
    #[error("groupoid integrity failure: {0}")]
    GroupoidIntegrity(String),
}

impl Error {
    pub fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn integrity(msg: impl Into<String>) -> Self {
        Error::GroupoidIntegrity(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
