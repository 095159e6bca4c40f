use std::time::Instant;

use crate::error::{Error, Result};
use crate::solver::{Method, SolveReport};
use crate::toeplitz::PentaToeplitz;

use super::PIVOT_ULPS;

/// Unpivoted LU on the five diagonals. Fill-in stays inside the band, so
/// factorization and solve are O(n).
pub fn banded_lu_solution(a: &PentaToeplitz, b: &[f64]) -> Result<Vec<f64>> {
    let n = a.n();
    if b.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: b.len(),
        });
    }
    let bands = a.bands();
    // The second super-diagonal is never touched by elimination.
    let l2 = vec![bands.sigma; n];
    let mut l1 = vec![bands.lambda; n];
    let mut d = vec![bands.alpha; n];
    let mut u1 = vec![bands.beta; n];
    let u2 = bands.gamma;
    let mut y = b.to_vec();

    for k in 0..n {
        let right1 = if k + 1 < n { u1[k] } else { 0.0 };
        let right2 = if k + 2 < n { u2 } else { 0.0 };
        let row_max = d[k].abs().max(right1.abs()).max(right2.abs());
        let pivot = d[k].abs();
        if pivot.is_nan() || pivot <= PIVOT_ULPS * f64::EPSILON * row_max {
            return Err(Error::ZeroPivot { row: k });
        }
        if k + 1 < n {
            let f = l1[k + 1] / d[k];
            d[k + 1] -= f * right1;
            if k + 2 < n {
                u1[k + 1] -= f * right2;
            }
            y[k + 1] -= f * y[k];
        }
        if k + 2 < n {
            let g = l2[k + 2] / d[k];
            l1[k + 2] -= g * right1;
            d[k + 2] -= g * right2;
            y[k + 2] -= g * y[k];
        }
    }

    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let mut acc = y[k];
        if k + 1 < n {
            acc -= u1[k] * x[k + 1];
        }
        if k + 2 < n {
            acc -= u2 * x[k + 2];
        }
        x[k] = acc / d[k];
    }
    Ok(x)
}

/// Timed unpivoted banded LU solve.
pub fn banded_lu_solve(a: &PentaToeplitz, b: &[f64]) -> Result<SolveReport> {
    let start = Instant::now();
    let x = banded_lu_solution(a, b)?;
    let elapsed = start.elapsed().as_secs_f64();
    let res = a.relative_residual(&x, b)?;
    Ok(SolveReport::new(x, res, elapsed, Method::BandedLu))
}
