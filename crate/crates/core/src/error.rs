use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

use crate::svs::SymbolicVectorSet;

/// Errors raised by the core crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Two operands do not share the same dimension.
    DimensionMismatch { expected: usize, found: usize },
    /// Vectors must have at least one component.
    ZeroDimension,
    /// An operation that requires canonical operands received a non-canonical one.
    NonCanonical,
    /// `share` was called on a pair that is not shareable.
    NotShareable,
    /// The enumeration box does not cover every bound vector.
    BoxTooSmall { needed: u32, given: u32 },
    /// Canonical union exceeded its step budget.
    UnionStepLimit { limit: usize },
    UnknownTransition(String),
    UnknownPlace(String),
    DuplicateId(String),
    NotEnabled { transition: String },
    NotReversible { transition: String },
    /// The initial marking exceeds a place capacity.
    InitialAboveCapacity { place: String },
    /// A fixpoint did not converge; carries the last iterate.
    NonConvergence { iterations: usize, last: Box<SymbolicVectorSet> },
    /// The explicit universe is larger than the allowed budget.
    BudgetExceeded { size: u128, budget: u128 },
    /// The explicit oracle needs finite capacities on every place.
    UnboundedPlace(String),
    /// A formula still contains derived operators.
    NotCore,
    Parse { pos: usize, msg: String },
    InvalidVector(String),
    InvalidOption(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::ZeroDimension => f.write_str("vectors must have at least one component"),
            Error::NonCanonical => f.write_str("operand is not in canonical form"),
            Error::NotShareable => f.write_str("symbolic vectors are not shareable"),
            Error::BoxTooSmall { needed, given } => {
                write!(f, "box {given} is smaller than bound component {needed}")
            }
            Error::UnionStepLimit { limit } => {
                write!(f, "canonical union exceeded {limit} steps")
            }
            Error::UnknownTransition(t) => write!(f, "unknown transition `{t}`"),
            Error::UnknownPlace(p) => write!(f, "unknown place `{p}`"),
            Error::DuplicateId(id) => write!(f, "duplicate id `{id}`"),
            Error::NotEnabled { transition } => write!(f, "transition `{transition}` is not enabled"),
            Error::NotReversible { transition } => {
                write!(f, "transition `{transition}` is not reversible at this marking")
            }
            Error::InitialAboveCapacity { place } => {
                write!(f, "initial marking of `{place}` exceeds its capacity")
            }
            Error::NonConvergence { iterations, last } => write!(
                f,
                "no fixpoint after {iterations} iterations (last iterate has {} members)",
                last.len()
            ),
            Error::BudgetExceeded { size, budget } => {
                write!(f, "explicit universe of {size} states exceeds budget {budget}")
            }
            Error::UnboundedPlace(p) => write!(f, "place `{p}` has no finite capacity"),
            Error::NotCore => f.write_str("formula contains derived operators; desugar it first"),
            Error::Parse { pos, msg } => write!(f, "parse error at {pos}: {msg}"),
            Error::InvalidVector(s) => write!(f, "invalid vector `{s}`"),
            Error::InvalidOption(s) => write!(f, "invalid option: {s}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
