use std::time::Instant;

use crate::error::{Error, Result};
use crate::solver::{Method, SolveReport};
use crate::toeplitz::{norm2, PentaToeplitz};

/// Largest dimension accepted on the dense path.
pub const MAX_DENSE_N: usize = 4096;

/// Square matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyDimension);
        }
        if entries.len() != n * n {
            return Err(Error::LengthMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("entries"));
        }
        Ok(Self { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: x.len(),
            });
        }
        Ok((0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

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

/// Dense realization of a pentadiagonal Toeplitz matrix.
pub fn densify(a: &PentaToeplitz) -> Result<DenseMatrix> {
    let n = a.n();
    if n > MAX_DENSE_N {
        return Err(Error::TooLarge {
            n,
            max: MAX_DENSE_N,
        });
    }
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        let lo = i.saturating_sub(2);
        let hi = (i + 2).min(n - 1);
        for j in lo..=hi {
            entries[i * n + j] = a.entry(i, j);
        }
    }
    DenseMatrix::new(n, entries)
}

/// Gaussian elimination with partial pivoting, then triangular solves.
pub fn plu_solution(m: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    let n = m.n;
    if b.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: b.len(),
        });
    }
    let mut lu = m.entries.clone();
    let mut x = b.to_vec();

    for k in 0..n {
        let (piv, piv_abs) =
            (k..n)
                .map(|i| (i, lu[i * n + k].abs()))
                .fold(
                    (k, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
        // Only an exactly zero pivot column stops elimination; tiny pivots
        // still give a backward-stable solve.
        if piv_abs.is_nan() || piv_abs == 0.0 {
            return Err(Error::SingularMatrix { column: k });
        }
        if piv != k {
            for j in 0..n {
                lu.swap(k * n + j, piv * n + j);
            }
            x.swap(k, piv);
        }
        let pivot = lu[k * n + k];
        let (head, tail) = lu.split_at_mut((k + 1) * n);
        let pivot_row = &head[k * n..];
        for i in k + 1..n {
            let row = &mut tail[(i - k - 1) * n..(i - k) * n];
            let f = row[k] / pivot;
            if f == 0.0 {
                continue;
            }
            row[k] = f;
            for j in k + 1..n {
                row[j] -= f * pivot_row[j];
            }
            x[i] -= f * x[k];
        }
    }

    for k in (0..n).rev() {
        let row = &lu[k * n..(k + 1) * n];
        let acc: f64 = row[k + 1..]
            .iter()
            .zip(&x[k + 1..])
            .map(|(a, b)| a * b)
            .sum();
        x[k] = (x[k] - acc) / row[k];
    }
    Ok(x)
}

/// Pivoted LU solve, timed, with the residual measured against `m`.
pub fn plu_solve(m: &DenseMatrix, b: &[f64]) -> Result<SolveReport> {
    let start = Instant::now();
    let x = plu_solution(m, b)?;
    let elapsed = start.elapsed().as_secs_f64();
    let res = m.relative_residual(&x, b)?;
    Ok(SolveReport::new(x, res, elapsed, Method::Plu))
}
