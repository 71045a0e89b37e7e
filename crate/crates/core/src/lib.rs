//! Recovery of a three-frequency trigonometric potential on a lattice from
//! quadratic and cubic spectral invariants, plus one-dimensional band
//! spectrum utilities and asymptotic coefficient extraction.

pub mod error;
pub mod extraction;
pub mod hill;
pub mod invariants;
pub mod io;
pub mod lattice;
pub mod potential;
pub mod reconstruct;

pub use error::{Error, Result};
