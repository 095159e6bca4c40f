//! The 2x2 corner system left after eliminating `A11`, and solution assembly.

use crate::error::{Error, Result};

use super::partition::PartitionedSystem;

/// Relative breakdown tolerance, in units of machine epsilon.
const BREAKDOWN_ULPS: f64 = 64.0;

/// `u, v, z` with `A11 u = b3`, `A11 v = p`, `A11 z = r`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntermediateSolves {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub z: Vec<f64>,
}

impl IntermediateSolves {
    pub fn compute(sys: &PartitionedSystem) -> Result<Self> {
        Ok(Self {
            u: sys.block.solve(&sys.b3)?,
            v: sys.block.solve(&sys.p)?,
            z: sys.block.solve(&sys.r)?,
        })
    }
}

/// Coefficients and right-hand side of the corner system
///
/// ```text
/// [ w^T v  w^T z ] [ x_{n-1} ]   [ w^T u - b1 ]
/// [ s^T v  s^T z ] [ x_n     ] = [ s^T u - b2 ]
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CornerSystem {
    pub wv: f64,
    pub wz: f64,
    pub sv: f64,
    pub sz: f64,
    pub rhs1: f64,
    pub rhs2: f64,
}

impl CornerSystem {
    pub fn new(sys: &PartitionedSystem, solves: &IntermediateSolves) -> Self {
        Self {
            wv: sys.w_dot(&solves.v),
            wz: sys.w_dot(&solves.z),
            sv: sys.s_dot(&solves.v),
            sz: sys.s_dot(&solves.z),
            rhs1: sys.w_dot(&solves.u) - sys.b1,
            rhs2: sys.s_dot(&solves.u) - sys.b2,
        }
    }

    pub fn solve(&self) -> Result<(f64, f64)> {
        corner_solve(self.wv, self.wz, self.sv, self.sz, self.rhs1, self.rhs2)
    }
}

/// Solve the corner system by eliminating `x_{n-1}` from the second row.
///
/// Returns `(x_{n-1}, x_n)`. `x_n` comes from the Schur complement
/// `sz - (sv/wv) wz`; `x_{n-1}` is then back-substituted from row one.
pub fn corner_solve(
    wv: f64,
    wz: f64,
    sv: f64,
    sz: f64,
    rhs1: f64,
    rhs2: f64,
) -> Result<(f64, f64)> {
    // Purely relative: the corner entries shrink geometrically with n while
    // the system itself stays well scaled.
    let scale = wv.abs().max(wz.abs()).max(sv.abs()).max(sz.abs());
    let tol = BREAKDOWN_ULPS * f64::EPSILON * scale;
    if wv.is_nan() || wv.abs() <= tol {
        return Err(Error::CornerBreakdown("w^T v is negligible"));
    }
    let ratio = sv / wv;
    let schur = sz - ratio * wz;
    if schur.is_nan() || schur.abs() <= tol {
        return Err(Error::CornerBreakdown("Schur complement is negligible"));
    }
    let x_n = (rhs2 - ratio * rhs1) / schur;
    let x_nm1 = (rhs1 - wz * x_n) / wv;
    Ok((x_nm1, x_n))
}

/// `x = (u - x_{n-1} v - x_n z, x_{n-1}, x_n)`.
pub fn assemble(u: &[f64], v: &[f64], z: &[f64], x_nm1: f64, x_n: f64) -> Result<Vec<f64>> {
    let m = u.len();
    for len in [v.len(), z.len()] {
        if len != m {
            return Err(Error::LengthMismatch {
                expected: m,
                found: len,
            });
        }
    }
    let mut x = Vec::with_capacity(m + 2);
    x.extend(
        u.iter()
            .zip(v)
            .zip(z)
            .map(|((ui, vi), zi)| ui - x_nm1 * vi - x_n * zi),
    );
    x.push(x_nm1);
    x.push(x_n);
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Cramer's rule.
    fn cramer(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64) -> (f64, f64) {
        let det = a * d - b * c;
        ((e * d - b * f) / det, (a * f - e * c) / det)
    }

    #[test]
    fn identity_corner() {
        for (a, c) in [(3.5, -2.0), (0.0, 1e-300), (-7e10, 4.25)] {
            assert_eq!(corner_solve(1.0, 0.0, 0.0, 1.0, a, c).unwrap(), (a, c));
        }
    }

    #[test]
    fn diagonal_corner() {
        assert_eq!(
            corner_solve(2.0, 0.0, 0.0, 4.0, 6.0, 8.0).unwrap(),
            (3.0, 2.0)
        );
    }

    #[test]
    fn full_corner_matches_cramer() {
        assert_eq!(cramer(1.0, 1.0, 1.0, 2.0, 3.0, 5.0), (1.0, 2.0));
        assert_eq!(
            corner_solve(1.0, 1.0, 1.0, 2.0, 3.0, 5.0).unwrap(),
            (1.0, 2.0)
        );

        let (x, y) = corner_solve(0.3, -1.2, 2.2, 0.7, 1.9, -0.4).unwrap();
        let (cx, cy) = cramer(0.3, -1.2, 2.2, 0.7, 1.9, -0.4);
        assert!((x - cx).abs() < 1e-13 && (y - cy).abs() < 1e-13);
    }

    #[test]
    fn breakdown_detection() {
        assert!(matches!(
            corner_solve(0.0, 1.0, 1.0, 1.0, 1.0, 1.0),
            Err(Error::CornerBreakdown(_))
        ));
        // rank-one 2x2
        assert!(matches!(
            corner_solve(1.0, 2.0, 2.0, 4.0, 1.0, 1.0),
            Err(Error::CornerBreakdown(_))
        ));
        assert!(matches!(
            corner_solve(0.0, 0.0, 0.0, 0.0, 1.0, 1.0),
            Err(Error::CornerBreakdown(_))
        ));
        // tiny but well-separated values still solve
        let (x, y) = corner_solve(2e-20, 1e-20, -1e-20, 2e-20, 3e-20, 1e-20).unwrap();
        assert!((x - 1.0).abs() < 1e-15 && (y - 1.0).abs() < 1e-15);
    }

    #[test]
    fn assemble_cases() {
        let u = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(
            assemble(&u, &[5.0; 4], &[6.0; 4], 0.0, 0.0).unwrap(),
            vec![1.0, 2.0, 3.0, 4.0, 0.0, 0.0]
        );
        assert_eq!(
            assemble(&[1.0; 4], &[1.0; 4], &[1.0; 4], 1.0, 1.0).unwrap(),
            vec![-1.0, -1.0, -1.0, -1.0, 1.0, 1.0]
        );
        assert!(matches!(
            assemble(&u, &[1.0; 3], &[1.0; 4], 1.0, 1.0),
            Err(Error::LengthMismatch {
                expected: 4,
                found: 3
            })
        ));
    }
}
