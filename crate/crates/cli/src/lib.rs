//! PNML input, JSON reports and the command-line frontend for `symvec`.

pub mod commands;
pub mod config;
pub mod error;
pub mod pnml;
pub mod report;

pub use error::{CliError, Result};
