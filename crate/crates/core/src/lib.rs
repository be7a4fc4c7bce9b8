//! Exact multi-ball "bowling" representations of the positive braid monoid.
//!
//! Balls are bowled into the lanes of a braid laid flat; at each crossing
//! balls on the over lane may fall onto the under lane. Recording where the
//! balls end up gives matrices over `Z[q]`:
//!
//! * [`multiball`]: up to `N` balls per lane, the representation that factors
//!   through the Iwahori-Hecke algebra;
//! * [`cabled`]: every lane replaced by `K` parallel lanes with one ball each,
//!   tracking only per-group counts.
//!
//! All arithmetic is exact: [`qpoly::QPoly`] has big-integer coefficients and
//! numeric evaluation uses big rationals.

pub mod braid;
pub mod cabled;
pub mod error;
pub mod matrix;
pub mod multiball;
pub mod qpoly;
pub mod report;
pub mod transition;

pub use braid::{specht_element, specht_half, BraidWord, HeckeElement, Permutation};
pub use cabled::{crossing_oracle, rho_cabled_matrix, CableState, FallDistribution, MicroOrder};
pub use error::{Error, Result};
pub use matrix::{PolyMatrix, RationalMatrix, SparseMatrix};
pub use multiball::{rho_element, rho_matrix, BallState};
pub use qpoly::{falling_probability, gauss_binom, q_factorial, quantum_int, QPoly, QScalar};
pub use report::CheckReport;
pub use transition::{Capacity, StateSpace, TransitionMatrix};
