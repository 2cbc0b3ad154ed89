//! Sensitivity of spin-squeezed magnetometers under a fixed total time budget.
//!
//! A register of `N` spins may spend part of the budget `τ` squeezing (two-axis twisting for
//! schemes B and C, one-axis twisting with an echo for B′ and C′) and the rest sensing a
//! weak field. The crate computes the resulting sensitivities exactly in the Dicke basis,
//! in a truncated Fock space for `N → ∞`, and in closed form, then optimizes the sensing
//! fraction and finds the twist strength at which squeezing pays off.
//!
//! Start with the `examples/` directory; `squeezesense --help` covers the command line.

pub mod bosonic;
pub mod cli;
pub mod error;
pub mod metrology;
pub mod protocols;
pub mod report;
pub mod spin;
pub mod sweep;
pub mod validation;

pub use error::{Error, Result};
