use alloc::string::String;
use core::fmt;

/// Errors raised by the exact-arithmetic and verification routines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Unsupported family/rank pair.
    InvalidAlgebra(String),
    /// A row, vector or index does not match the algebra's shape.
    Shape(String),
    /// A table is not deep enough for the requested entry.
    Depth(String),
    /// An argument is outside the documented domain.
    Domain(String),
    /// A series expansion was requested but the leading slice is not a unit.
    NonUnitLead(String),
    /// An exact division that must succeed did not.
    NotDivisible(String),
    /// A denominator vanished after substitution.
    ZeroDenominator(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidAlgebra(s) => write!(f, "invalid algebra: {s}"),
            Error::Shape(s) => write!(f, "shape mismatch: {s}"),
            Error::Depth(s) => write!(f, "insufficient depth: {s}"),
            Error::Domain(s) => write!(f, "out of domain: {s}"),
            Error::NonUnitLead(s) => write!(f, "leading slice is not a unit: {s}"),
            Error::NotDivisible(s) => write!(f, "division not exact: {s}"),
            Error::ZeroDenominator(s) => write!(f, "zero denominator: {s}"),
        }
    }
}

impl core::error::Error for Error {}
