//! Finite chain complexes with integer and mod-p coefficients.
//!
//! A [`Complex`] carries cells, integer incidences and volumes; an
//! [`IntChain`] or [`ModPChain`] is a sparse coefficient vector over one
//! dimension of it. Mass is `Σ |g|·vol` and mass mod p replaces `|g|` by the
//! distance from `g` to `pℤ`, which is the mass of the canonical
//! representative returned by [`IntChain::reduce_mod_p`].

mod chains;
mod complex;
mod modulus;
mod pushforward;

use thiserror::Error;

pub use chains::{IntChain, ModPChain};
pub use complex::{validate_complex, Cell, CellRef, Complex, ComplexDescription, ComplexViolation, RawCell};
pub use modulus::{norm_mod_p, Modulus};
pub use pushforward::CellularMap;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum ChainError {
    #[error("invalid modulus {0}: p must be at least 2")]
    InvalidModulus(u64),
    #[error("no boundary in dimension 0")]
    NoBoundaryInDimensionZero,
    #[error("no cell with index {index} in dimension {dim}")]
    NoSuchCell { dim: usize, index: usize },
    #[error("unknown cell `{0}`")]
    UnknownLabel(String),
    #[error("expected a cell of dimension {expected}, found dimension {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("not a chain map at cell `{cell}` (dimension {dim}): f(∂σ) ≠ ∂f(σ)")]
    NotAChainMap { cell: String, dim: usize },
    #[error("cellular map image of `{cell}` is invalid: {reason}")]
    BadImage { cell: String, reason: String },
    #[error("chain lives on a different complex than the map")]
    WrongComplex,
}
