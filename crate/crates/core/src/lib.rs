//! Radial Schrödinger workbench: bound states, momentum decomposition,
//! pointwise energy fields, Born scattering, and split-step propagation,
//! all in hartree atomic units.

// Indexed loops stay where the index is the stencil; negated comparisons
// are NaN-rejecting guards and must not become their `<=`/`>=` duals.
#![allow(clippy::needless_range_loop)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod born;
pub mod bound;
pub mod calculus;
pub mod energetics;
pub mod error;
pub mod grid;
pub mod momentum;
pub mod potential;
pub mod tdse;
pub mod units;
pub mod verify;
pub mod wavefunction;

pub use error::{Error, Result};
pub use grid::{Grid, GridKind, QuadratureRule};
pub use potential::Potential;
pub use wavefunction::{Normalization, Wavefunction};
