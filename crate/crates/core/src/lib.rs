//! Exact computations for reflexive lattice polytopes and the Calabi-Yau
//! hypersurfaces they define in toric varieties.

pub mod chern;
pub mod cli;
pub mod error;
pub mod fan;
pub mod lattice;
pub mod hodge;
pub mod io;
pub mod polytope;

pub use error::{Error, ParseError, Result};
