//! Pentadiagonal Toeplitz matrices stored as five band scalars.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The five constant diagonals of a pentadiagonal Toeplitz matrix.
///
/// `sigma` sits two places below the main diagonal, `lambda` one below,
/// `alpha` on it, `beta` one above and `gamma` two above.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bands {
    pub sigma: f64,
    pub lambda: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl Bands {
    pub const fn new(sigma: f64, lambda: f64, alpha: f64, beta: f64, gamma: f64) -> Self {
        Self {
            sigma,
            lambda,
            alpha,
            beta,
            gamma,
        }
    }

    pub const IDENTITY: Bands = Bands::new(0.0, 0.0, 1.0, 0.0, 0.0);

    /// Band values ordered by column offset, -2 through +2.
    pub fn by_offset(&self) -> [f64; 5] {
        [self.sigma, self.lambda, self.alpha, self.beta, self.gamma]
    }

    fn check_finite(&self) -> Result<()> {
        let named = [
            ("sigma", self.sigma),
            ("lambda", self.lambda),
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma", self.gamma),
        ];
        for (name, v) in named {
            if !v.is_finite() {
                return Err(Error::NonFinite(name));
            }
        }
        Ok(())
    }
}

/// An `n x n` pentadiagonal Toeplitz matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PentaToeplitz {
    n: usize,
    bands: Bands,
}

impl PentaToeplitz {
    pub fn new(
        n: usize,
        sigma: f64,
        lambda: f64,
        alpha: f64,
        beta: f64,
        gamma: f64,
    ) -> Result<Self> {
        Self::from_bands(n, Bands::new(sigma, lambda, alpha, beta, gamma))
    }

    pub fn from_bands(n: usize, bands: Bands) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyDimension);
        }
        bands.check_finite()?;
        Ok(Self { n, bands })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bands(&self) -> &Bands {
        &self.bands
    }

    /// Entry `(i, j)` with zero-based indices.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.n && j < self.n);
        let offset = j as isize - i as isize;
        match offset {
            -2..=2 => self.bands.by_offset()[(offset + 2) as usize],
            _ => 0.0,
        }
    }

    /// `y = A x` in O(n), dropping terms that fall outside the matrix.
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        if x.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: x.len(),
            });
        }
        let Bands {
            sigma,
            lambda,
            alpha,
            beta,
            gamma,
        } = self.bands;
        let at = |k: isize| -> f64 {
            if k >= 0 && (k as usize) < n {
                x[k as usize]
            } else {
                0.0
            }
        };
        let mut y = Vec::with_capacity(n);
        for i in 0..n {
            let i = i as isize;
            y.push(
                sigma * at(i - 2)
                    + lambda * at(i - 1)
                    + alpha * at(i)
                    + beta * at(i + 1)
                    + gamma * at(i + 2),
            );
        }
        Ok(y)
    }

    /// `||b - A x||_2 / ||b||_2`.
    pub fn relative_residual(&self, x: &[f64], b: &[f64]) -> Result<f64> {
        if b.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: b.len(),
            });
        }
        let b_norm = norm2(b);
        if b_norm == 0.0 {
            return Err(Error::ZeroRhs);
        }
        let ax = self.matvec(x)?;
        let diff: Vec<f64> = b.iter().zip(&ax).map(|(bi, axi)| bi - axi).collect();
        Ok(norm2(&diff) / b_norm)
    }
}

/// Euclidean norm, scaled by the largest magnitude so large entries do not overflow.
pub fn norm2(v: &[f64]) -> f64 {
    let scale = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    let sum: f64 = v.iter().map(|x| (x / scale) * (x / scale)).sum();
    scale * sum.sqrt()
}

#[cfg(test)]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
