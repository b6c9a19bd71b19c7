//! Exact computations around limit groups: free and surface group words,
//! ping-pong certificates for Baumslag-type nontriviality, Dehn-twist
//! families, generalized doubles and finite matrix targets.

pub mod baumslag;
pub mod construct;
pub mod error;
pub mod surface;
pub mod targets;
pub mod tree;
pub mod words;

pub use error::{Error, Result};
pub use words::{FreeWord, Letter};

/// Library version, embedded in experiment reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
