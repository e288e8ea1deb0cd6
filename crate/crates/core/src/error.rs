//! Crate-wide error type.

use alloc::string::String;
use core::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Malformed Cartan matrix: bad diagonal, positive off-diagonal entry,
    /// asymmetric zero pattern, or not symmetrizable by a positive diagonal.
    MalformedCartan(String),
    /// Root closure exceeded the finite-type cap.
    NotFiniteType { cap: usize },
    /// Unknown named type.
    UnknownType(String),
    /// Group order exceeds the configured cap.
    OrderCap { cap: usize },
    /// Input data failed validation (poset, diagram, complex, sheaf, ...).
    Invalid(String),
    /// The proposed comparison map is not a right adjoint.
    NotAdjoint(String),
    /// Instance exceeds a size cap meant to keep exact arithmetic tractable.
    SizeCap(String),
    /// A point with a nontrivial stabilizer was passed where a regular orbit
    /// is required; the payload names a stabilizing reflection.
    NonGenericPoint(String),
    /// Geometrically degenerate input (e.g. points not spanning the space).
    Degenerate(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::MalformedCartan(msg) => write!(f, "malformed Cartan matrix: {msg}"),
            Error::NotFiniteType { cap } => {
                write!(f, "not finite type (root closure exceeded cap {cap})")
            }
            Error::UnknownType(name) => write!(f, "unknown type name: {name}"),
            Error::OrderCap { cap } => write!(f, "group order exceeds cap {cap}"),
            Error::Invalid(msg) => write!(f, "invalid input: {msg}"),
            Error::NotAdjoint(msg) => write!(f, "not a right adjoint: {msg}"),
            Error::SizeCap(msg) => write!(f, "size cap exceeded: {msg}"),
            Error::NonGenericPoint(msg) => write!(f, "point is not generic: {msg}"),
            Error::Degenerate(msg) => write!(f, "degenerate input: {msg}"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
