use std::fmt;

use thiserror::Error;

/// Errors raised by the geometric and toric operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("the zero vector has no primitive direction")]
    ZeroVector,
    #[error("hyperplane normal {0} is not primitive")]
    NonPrimitiveNormal(String),
    #[error("no points given")]
    EmptyInput,
    #[error("points span an affine subspace of dimension {affine_dim} in ambient dimension {ambient_dim}")]
    NotFullDimensional { affine_dim: usize, ambient_dim: usize },
    #[error("the origin is not an interior point")]
    OriginNotInterior,
    #[error("polytope is not reflexive")]
    NotReflexive,
    #[error("operation needs a {expected}-dimensional polytope, got dimension {found}")]
    WrongDimension { expected: usize, found: usize },
    #[error("cone {0} is not simplicial and full-dimensional")]
    NotSimplicial(String),
    #[error("fan is not complete: {0}")]
    IncompleteFan(String),
    #[error("divisor is not Q-Cartier")]
    NotQCartier,
    #[error("ray {0} is not a ray of the fan")]
    UnknownRay(String),
    #[error("divisor has {found} coefficients but the fan has {expected} rays")]
    DivisorSize { expected: usize, found: usize },
    #[error("triangulation is not fine: lattice point {0} is not used")]
    NotFine(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Malformed polytope file or command-line value.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    /// 1-based line number, if the error is tied to a line.
    pub line: Option<usize>,
    pub message: String,
}

impl ParseError {
    pub fn at(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line: Some(line),
            message: message.into(),
        }
    }

    pub fn new(message: impl Into<String>) -> Self {
        ParseError {
            line: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "parse error at line {line}: {}", self.message),
            None => write!(f, "parse error: {}", self.message),
        }
    }
}
