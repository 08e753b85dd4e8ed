//! Shared numeric kernels.

pub mod bessel;
pub mod grid;
pub mod hilbert;
pub mod linalg;
pub mod matrix;
pub mod pv;
pub mod quad;

pub use bessel::bessel_j0;
pub use grid::{Field2, Field3, FnField, GridFunction, GridHeader};
pub use hilbert::{discrete_hilbert, hilbert_matrix};
pub use linalg::{hermitian_eigen, hermitian_sqrt, operator_norm, psd_project, real_operator_norm, HermitianEigen};
pub use matrix::{parse_complex, ComplexMatrix, MatrixJson};
pub use pv::{pv_integral_1d, pv_richardson, PvOptions};
pub use quad::{GaussRule, Grading};
