//! Symbolic vector sets and global CTL model checking for Petri nets with
//! place capacities.
//!
//! A [`SymbolicVector`] `(a, b)` denotes the vectors that dominate every
//! vector of `a` and no vector of `b`. Finite unions of them
//! ([`SymbolicVectorSet`]) have a unique canonical form, which makes
//! fixpoint detection a structural comparison.
#![no_std]

extern crate alloc;

pub mod ctl;
pub mod error;
pub mod evaluator;
pub mod gen;
pub mod oracle;
pub mod petrinet;
pub mod symbolic_vector;
pub mod svs;
pub mod vector;

pub use ctl::Formula;
pub use error::{Error, Result};
pub use evaluator::{check, EvalOptions, EvalStats, Evaluator};
pub use petrinet::{PetriNet, PetriNetBuilder};
pub use svs::{Count, SymbolicVectorSet};
pub use symbolic_vector::SymbolicVector;
pub use vector::{Marking, Vector};

#[doc(hidden)]
pub mod __private {
    pub use alloc::vec;
}
