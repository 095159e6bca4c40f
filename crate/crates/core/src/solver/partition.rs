//! Row permutation and block partition of a pentadiagonal Toeplitz system.
//!
//! Moving rows 1 and 2 of `A` to the bottom gives
//!
//! ```text
//!        [ A11  p  r ]
//!  PA =  [ w^T  0  0 ]
//!        [ s^T  0  0 ]
//! ```
//!
//! where `A11` is `(n-2) x (n-2)` upper triangular Toeplitz with diagonal
//! `sigma` and super-diagonals `lambda, alpha, beta, gamma`. The right-hand
//! side is permuted the same way into `(b3, b1, b2)`.

use crate::error::{Error, Result};
use crate::toeplitz::{Bands, PentaToeplitz};

/// Smallest `n` for which rows 1-2 of `A` miss the last two columns and the
/// triangular prologue fits inside `A11`.
pub const MIN_FAST_N: usize = 6;

/// Smallest block accepted by [`UpperBandToeplitz::solve`].
pub const MIN_BLOCK: usize = 4;

/// Upper-triangular banded Toeplitz block `A11`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperBandToeplitz {
    pub m: usize,
    /// Diagonal, then super-diagonals one to four.
    pub bands: Bands,
    pub sigma1: f64,
    pub lambda1: f64,
    pub alpha1: f64,
    pub beta1: f64,
    pub gamma1: f64,
}

impl UpperBandToeplitz {
    pub fn new(m: usize, bands: Bands) -> Result<Self> {
        if m < MIN_BLOCK {
            return Err(Error::UnsupportedSize {
                size: m,
                min: MIN_BLOCK,
            });
        }
        let sigma = bands.sigma;
        if sigma == 0.0 {
            return Err(Error::SingularBlock);
        }
        Ok(Self {
            m,
            bands,
            sigma1: 1.0 / sigma,
            lambda1: bands.lambda / sigma,
            alpha1: bands.alpha / sigma,
            beta1: bands.beta / sigma,
            gamma1: bands.gamma / sigma,
        })
    }

    /// Entry `(i, j)`, zero-based.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        if j < i || j > i + 4 {
            return 0.0;
        }
        self.bands.by_offset()[j - i]
    }

    /// Banded back substitution for `A11 y = c`.
    ///
    /// Four explicit prologue steps fill `y[m-1] .. y[m-4]`, then the
    /// five-term recurrence runs upward to `y[0]`.
    pub fn solve(&self, c: &[f64]) -> Result<Vec<f64>> {
        let m = self.m;
        if c.len() != m {
            return Err(Error::LengthMismatch {
                expected: m,
                found: c.len(),
            });
        }
        let (s1, l1, a1, b1, g1) = (
            self.sigma1,
            self.lambda1,
            self.alpha1,
            self.beta1,
            self.gamma1,
        );
        let mut y = vec![0.0; m];
        y[m - 1] = s1 * c[m - 1];
        y[m - 2] = s1 * c[m - 2] - l1 * y[m - 1];
        y[m - 3] = s1 * c[m - 3] - l1 * y[m - 2] - a1 * y[m - 1];
        y[m - 4] = s1 * c[m - 4] - l1 * y[m - 3] - a1 * y[m - 2] - b1 * y[m - 1];
        for k in (0..m - 4).rev() {
            y[k] = s1 * c[k] - l1 * y[k + 1] - a1 * y[k + 2] - b1 * y[k + 3] - g1 * y[k + 4];
        }
        Ok(y)
    }
}

/// Free-function form of [`UpperBandToeplitz::solve`].
pub fn tri_solve(block: &UpperBandToeplitz, c: &[f64]) -> Result<Vec<f64>> {
    block.solve(c)
}

/// The permuted, partitioned form of `A x = b`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionedSystem {
    pub block: UpperBandToeplitz,
    /// Column `n-1` of the permuted matrix above the corner.
    pub p: Vec<f64>,
    /// Column `n` of the permuted matrix above the corner.
    pub r: Vec<f64>,
    /// Row 1 of `A` restricted to the first `n-2` columns.
    pub w: Vec<f64>,
    /// Row 2 of `A` restricted to the first `n-2` columns.
    pub s: Vec<f64>,
    pub b3: Vec<f64>,
    pub b1: f64,
    pub b2: f64,
}

impl PartitionedSystem {
    pub fn n(&self) -> usize {
        self.block.m + 2
    }

    /// `w^T y` over the three leading nonzeros of `w`, ascending index.
    pub fn w_dot(&self, y: &[f64]) -> f64 {
        let b = &self.block.bands;
        b.alpha * y[0] + b.beta * y[1] + b.gamma * y[2]
    }

    /// `s^T y` over the four leading nonzeros of `s`, ascending index.
    pub fn s_dot(&self, y: &[f64]) -> f64 {
        let b = &self.block.bands;
        b.lambda * y[0] + b.alpha * y[1] + b.beta * y[2] + b.gamma * y[3]
    }

    /// Row `i` (zero-based) of the permuted matrix `PA`, densified.
    pub fn permuted_row(&self, i: usize) -> Vec<f64> {
        let n = self.n();
        let m = self.block.m;
        let mut row = vec![0.0; n];
        if i < m {
            for (j, v) in row.iter_mut().take(m).enumerate() {
                *v = self.block.entry(i, j);
            }
            row[m] = self.p[i];
            row[m + 1] = self.r[i];
        } else if i == m {
            row[..m].copy_from_slice(&self.w);
        } else {
            row[..m].copy_from_slice(&self.s);
        }
        row
    }
}

/// Build the partitioned system for `A x = b`.
pub fn partition(a: &PentaToeplitz, b: &[f64]) -> Result<PartitionedSystem> {
    let n = a.n();
    if n < MIN_FAST_N {
        return Err(Error::UnsupportedSize {
            size: n,
            min: MIN_FAST_N,
        });
    }
    if b.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: b.len(),
        });
    }
    let bands = *a.bands();
    let m = n - 2;
    let block = UpperBandToeplitz::new(m, bands)?;

    let mut p = vec![0.0; m];
    p[m - 4..].copy_from_slice(&[bands.gamma, bands.beta, bands.alpha, bands.lambda]);
    let mut r = vec![0.0; m];
    r[m - 3..].copy_from_slice(&[bands.gamma, bands.beta, bands.alpha]);
    let mut w = vec![0.0; m];
    w[..3].copy_from_slice(&[bands.alpha, bands.beta, bands.gamma]);
    let mut s = vec![0.0; m];
    s[..4].copy_from_slice(&[bands.lambda, bands.alpha, bands.beta, bands.gamma]);

    Ok(PartitionedSystem {
        block,
        p,
        r,
        w,
        s,
        b3: b[2..].to_vec(),
        b1: b[0],
        b2: b[1],
    })
}
