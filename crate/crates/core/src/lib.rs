//! Combinatorics of Brill-Noether loci on chains.
//!
//! The crate models two degenerations of a genus-`g` curve side by side:
//!
//! * a general chain of elliptic curves, where limit linear series are
//!   described by per-component bundle classes and vanishing sequences
//!   ([`elliptic`], [`effective`]);
//! * a general chain of loops, where divisors live on a metric graph with
//!   exact rational edge lengths ([`tropical`]).
//!
//! Components of both loci are indexed by fillings of a rectangular Young
//! diagram ([`tableaux`]). [`oracle`] is an independent chip-firing model
//! used to cross-check every tropical rank and effectivity claim.
//!
//! Everything here is `no_std` + `alloc`; file formats and the command-line
//! front end live in the `bnchain` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod effective;
pub mod elliptic;
mod error;
pub mod oracle;
pub mod tableaux;
pub mod tropical;
pub mod vanishing;

pub use error::{Error, Result, TableauViolation};
pub use tableaux::{BNParams, Tableau};
pub use vanishing::VanishingSequence;

/// Exact rational number used for loop lengths and coordinates.
pub type Rational = num_rational::Ratio<i64>;
