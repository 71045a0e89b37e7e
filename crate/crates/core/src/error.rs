//! Crate-wide error type and result alias.

use std::fmt;

/// Errors surfaced by lattice geometry, reconstruction, and spectral routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// The three supplied vectors do not span three-dimensional space.
    SingularBasis { det: f64 },
    /// The basis fails one or more of the twelve admissibility inequalities.
    NotAdmissible { violations: Vec<String> },
    /// The zero vector was supplied where a nonzero lattice element is required.
    ZeroVector,
    /// Two inputs that must be linearly independent are collinear.
    CollinearInput,
    /// A genericity condition needed by the current operation does not hold.
    NonGeneric(String),
    /// Sign resolution did not isolate a unique candidate branch.
    AmbiguousSigns { survivors: usize },
    /// A squared modulus came out negative beyond rounding slack.
    BadModulus { context: &'static str, value: f64 },
    /// A linear system was too close to singular to trust.
    IllConditioned(String),
    /// The requested matrix truncation cannot resolve the requested data.
    TruncationTooSmall { needed: usize, got: usize },
    /// Band edges failed their ordering constraint beyond tolerance.
    InterlacingViolation { index: usize, amount: f64 },
    /// A spectral gap fell below the resolvable floor.
    GapUnderflow { index: usize },
    /// Invalid configuration or request.
    Config(String),
    /// Malformed input data.
    Parse(String),
    /// Underlying I/O failure.
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::SingularBasis { det } => {
                write!(f, "basis vectors are linearly dependent (det = {det:e})")
            }
            Error::NotAdmissible { violations } => {
                write!(f, "basis is not admissible: {}", violations.join("; "))
            }
            Error::ZeroVector => write!(f, "zero vector is not a valid lattice direction"),
            Error::CollinearInput => write!(f, "inputs are collinear"),
            Error::NonGeneric(what) => write!(f, "genericity failure: {what}"),
            Error::AmbiguousSigns { survivors } => {
                write!(f, "sign resolution left {survivors} consistent candidates")
            }
            Error::BadModulus { context, value } => {
                write!(f, "negative squared modulus for {context}: {value:e}")
            }
            Error::IllConditioned(what) => write!(f, "ill-conditioned system: {what}"),
            Error::TruncationTooSmall { needed, got } => {
                write!(f, "truncation {got} too small, need at least {needed}")
            }
            Error::InterlacingViolation { index, amount } => {
                write!(f, "band edges out of order at index {index} by {amount:e}")
            }
            Error::GapUnderflow { index } => {
                write!(f, "spectral gap at index {index} below resolvable floor")
            }
            Error::Config(what) => write!(f, "invalid configuration: {what}"),
            Error::Parse(what) => write!(f, "parse error: {what}"),
            Error::Io(what) => write!(f, "i/o error: {what}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
