//! Ramification triples of fully ramified quaternion extensions of dyadic
//! fields, computed with truncated 2-adic arithmetic.
//!
//! Start with [`localfield::make_base_field`], adjoin square roots with
//! [`localfield::adjoin_sqrt`], and build quaternion extensions with
//! [`quaternion::build_quaternion`]. The [`catalog`] module holds the sets of
//! admissible triples and the witness generator.

pub mod catalog;
pub mod cli;
pub mod error;
pub mod localfield;
pub mod quaternion;
pub mod ramify;
pub mod residue;
pub mod squares;
pub mod symbols;

pub use error::{Error, Result};
pub use localfield::{Elem, Field, Val};
pub use residue::{ResidueElem, ResidueField};
