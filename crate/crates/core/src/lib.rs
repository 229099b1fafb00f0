//! Maslov-type indices of paths of complex symplectic matrices, computed by
//! eigenvalue winding with a crossing-form cross-check, and verifiers for the
//! iteration formulae built on them.
//!
//! `no_std` with `alloc`; all randomness is seeded.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod crossing;
pub mod error;
pub mod iteration;
pub mod lagrangian;
pub mod linalg;
pub mod maslov;
pub mod path;
pub mod polar;
pub mod positivity;
pub mod random;
pub mod space;
pub mod tolerance;

pub use error::{Error, Result};
pub use space::{NormalizedSpace, SymplecticSpace};
pub use tolerance::Tolerances;
