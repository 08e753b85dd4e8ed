//! Numerical verification tools for Schur and Herz-Schur multipliers, singular
//! kernels on the Heisenberg group, and lattice induction of Fourier-algebra functions.

// `!(x > 0.0)` style guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod claims;
pub mod distributions;
pub mod error;
pub mod groups;
pub mod lattice;
pub mod multiplier;
pub mod numerics;
pub mod report;
pub mod schur;

pub use error::{Error, Result};
