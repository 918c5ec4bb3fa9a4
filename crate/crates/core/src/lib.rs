//! Transformation semigroups of bifix-free regular languages.

pub mod automata;
pub mod cache;
pub mod conflicts;
pub mod error;
pub mod par;
pub mod phimap;
pub mod sample;
pub mod semigroups;
pub mod transmap;

pub use error::{Error, Result};
