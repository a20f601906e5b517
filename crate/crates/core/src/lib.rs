//! Nonnegativity witness sets for forms invariant under finite reflection
//! groups.
//!
//! A form of low degree that is invariant under the reflection group of a
//! root system is nonnegative everywhere iff it is nonnegative on the union
//! of the root hyperplanes. This crate provides the exact and numeric
//! machinery to apply and check that statement: root systems and their
//! groups ([`rootsys`]), sparse polynomials ([`polyalg`]), basic invariants
//! ([`invariants`]), the Chevalley Jacobian ([`jacobian`]) and the witness
//! procedures themselves ([`witness`]).

pub mod error;
pub mod invariants;
pub mod jacobian;
pub mod linalg;
pub mod parallel;
pub mod polyalg;
pub mod rootsys;
pub mod scalar;
pub mod witness;

pub use error::{Error, Result};
pub use scalar::Rational;
