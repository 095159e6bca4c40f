//! Direct solvers for pentadiagonal Toeplitz systems `A x = b`.
//!
//! [`solver::solve_fast`] runs in O(n) by reducing the system to three
//! banded back substitutions and a 2x2 corner solve. The [`baselines`]
//! module provides pivoted dense LU and unpivoted banded LU for comparison,
//! and [`bench`] reproduces the accuracy/timing grid over the three standard
//! parameter sets.

pub mod baselines;
pub mod bench;
pub mod cli;
pub mod error;
pub mod solver;
pub mod toeplitz;
pub mod vecio;

pub use error::{Error, Result};
pub use solver::{solve_fast, Method, SolveReport};
pub use toeplitz::{Bands, PentaToeplitz};
