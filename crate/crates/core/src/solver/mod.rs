//! Fast O(n) direct solver for pentadiagonal Toeplitz systems.
//!
//! The solve permutes `A`, eliminates the upper-triangular Toeplitz block
//! with three banded back substitutions, solves a 2x2 corner system for the
//! last two unknowns and assembles the rest of the solution from them.

mod corner;
mod partition;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::toeplitz::PentaToeplitz;

pub use corner::{assemble, corner_solve, CornerSystem, IntermediateSolves};
pub use partition::{
    partition, tri_solve, PartitionedSystem, UpperBandToeplitz, MIN_BLOCK, MIN_FAST_N,
};

/// Relative residual above which a report is flagged unstable.
pub const INSTABILITY_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Fast,
    Plu,
    BandedLu,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Fast, Method::Plu, Method::BandedLu];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Fast => "fast",
            Method::Plu => "plu",
            Method::BandedLu => "banded_lu",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "fast" => Ok(Method::Fast),
            "plu" => Ok(Method::Plu),
            "banded_lu" | "banded-lu" | "lu" => Ok(Method::BandedLu),
            other => Err(format!(
                "unknown method `{other}` (expected fast, plu or banded_lu)"
            )),
        }
    }
}

/// Result of one solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub x: Vec<f64>,
    pub relative_residual: f64,
    pub elapsed_seconds: f64,
    pub method: Method,
    pub unstable: bool,
}

impl SolveReport {
    pub fn new(x: Vec<f64>, relative_residual: f64, elapsed_seconds: f64, method: Method) -> Self {
        Self {
            x,
            relative_residual,
            elapsed_seconds,
            method,
            // NaN residuals count as unstable
            unstable: relative_residual.is_nan() || relative_residual > INSTABILITY_THRESHOLD,
        }
    }
}

/// Solution of `A x = b` by the fast algorithm, without timing or residual.
pub fn fast_solution(a: &PentaToeplitz, b: &[f64]) -> Result<Vec<f64>> {
    let sys = partition(a, b)?;
    let solves = IntermediateSolves::compute(&sys)?;
    let (x_nm1, x_n) = CornerSystem::new(&sys, &solves).solve()?;
    assemble(&solves.u, &solves.v, &solves.z, x_nm1, x_n)
}

/// Solve `A x = b` and report the relative residual and wall time.
pub fn solve_fast(a: &PentaToeplitz, b: &[f64]) -> Result<SolveReport> {
    let start = Instant::now();
    let x = fast_solution(a, b)?;
    let elapsed = start.elapsed().as_secs_f64();
    let res = a.relative_residual(&x, b)?;
    Ok(SolveReport::new(x, res, elapsed, Method::Fast))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::toeplitz::Bands;

    #[test]
    fn roundtrip_test1_n7() {
        let a = PentaToeplitz::new(7, 5.0, 2.0, 4.0, 1.0, 3.0).unwrap();
        let b = a.matvec(&[1.0; 7]).unwrap();
        let rep = solve_fast(&a, &b).unwrap();
        assert_eq!(rep.method, Method::Fast);
        assert!(!rep.unstable);
        for xi in &rep.x {
            assert!((xi - 1.0).abs() <= 1e-12, "{xi}");
        }
        assert_eq!(
            rep.relative_residual,
            a.relative_residual(&rep.x, &b).unwrap()
        );
    }

    #[test]
    fn identity_is_rejected() {
        // sigma is the A11 diagonal, so the identity has a singular block
        let a = PentaToeplitz::from_bands(6, Bands::IDENTITY).unwrap();
        assert_eq!(
            solve_fast(&a, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]),
            Err(Error::SingularBlock)
        );
    }

    #[test]
    fn zero_sigma_is_singular_block() {
        let a = PentaToeplitz::new(8, 0.0, 2.0, 4.0, 1.0, 3.0).unwrap();
        assert_eq!(solve_fast(&a, &[1.0; 8]), Err(Error::SingularBlock));
        assert_eq!(
            Error::SingularBlock.to_string(),
            "pivot breakdown at A₁₁ diagonal"
        );
    }

    #[test]
    fn small_n_rejected() {
        let a = PentaToeplitz::new(5, 5.0, 2.0, 4.0, 1.0, 3.0).unwrap();
        assert_eq!(
            solve_fast(&a, &[1.0; 5]),
            Err(Error::UnsupportedSize { size: 5, min: 6 })
        );
    }

    #[test]
    fn intermediate_solves_satisfy_block_equations() {
        let a = PentaToeplitz::new(20, 28.0, 19.0, 17.0, 21.0, 25.0).unwrap();
        let b: Vec<f64> = (0..20).map(|i| 1.0 + (i as f64).sqrt()).collect();
        let sys = partition(&a, &b).unwrap();
        let iv = IntermediateSolves::compute(&sys).unwrap();
        let m = sys.block.m;
        for (y, rhs) in [(&iv.u, &sys.b3), (&iv.v, &sys.p), (&iv.z, &sys.r)] {
            let back: Vec<f64> = (0..m)
                .map(|i| (0..m).map(|j| sys.block.entry(i, j) * y[j]).sum())
                .collect();
            let err = crate::toeplitz::norm2(
                &back
                    .iter()
                    .zip(rhs.iter())
                    .map(|(a, b)| a - b)
                    .collect::<Vec<_>>(),
            );
            assert!(err <= 1e-10 * crate::toeplitz::norm2(rhs));
        }
    }

    #[test]
    fn method_names_roundtrip() {
        for m in Method::ALL {
            assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
        }
        assert!("qr".parse::<Method>().is_err());
    }

    #[test]
    fn unstable_flag_tracks_threshold() {
        assert!(!SolveReport::new(vec![], 1e-8, 0.0, Method::Fast).unstable);
        assert!(SolveReport::new(vec![], 1.1e-8, 0.0, Method::Fast).unstable);
        assert!(SolveReport::new(vec![], f64::NAN, 0.0, Method::Fast).unstable);
    }
}
