//! Finite ortholattices and the quantifier structures that live on them.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of immutable finite data: law checkers return [`Report`]s with
//! the lexicographically least witness per law, and every search runs in a
//! fixed canonical order so results do not depend on scheduling. Callers that
//! want parallelism split the work through the `*_candidates` / shard entry
//! points and merge deterministically.

#![no_std]

extern crate alloc;

pub mod amalgam;
pub mod error;
pub mod frames;
pub mod functional;
pub mod index;
pub mod monadic;
pub mod ortho;
pub mod polyadic;
pub mod report;

pub use error::Error;
pub use ortho::{Candidate, FiniteOrtholattice, OrthoOps};
pub use report::{Law, Report, Violation};
