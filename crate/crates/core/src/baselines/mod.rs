//! Reference solvers: dense LU with partial pivoting and unpivoted banded LU.

mod banded;
mod dense;

pub use banded::{banded_lu_solution, banded_lu_solve};
pub use dense::{densify, plu_solution, plu_solve, DenseMatrix, MAX_DENSE_N};

/// Banded LU pivot tolerance, in units of machine epsilon relative to the row scale.
pub(crate) const PIVOT_ULPS: f64 = 64.0;
