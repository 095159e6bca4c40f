use penta_toeplitz::baselines::{banded_lu_solution, densify, plu_solution};
use penta_toeplitz::bench::{true_solution, TestId};
use penta_toeplitz::solver::{
    assemble, fast_solution, partition, solve_fast, tri_solve, IntermediateSolves,
    UpperBandToeplitz,
};
use penta_toeplitz::vecio;
use penta_toeplitz::{Bands, PentaToeplitz};
use proptest::prelude::*;

fn test_id() -> impl Strategy<Value = TestId> {
    prop_oneof![
        Just(TestId::Test1),
        Just(TestId::Test2),
        Just(TestId::Test3)
    ]
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

fn dense_dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn roundtrip_residual(test in test_id(), n in 6usize..=512, seed in any::<u64>()) {
        prop_assume!(test != TestId::Test2 || n <= 256);
        let a = PentaToeplitz::from_bands(n, test.bands()).unwrap();
        let b = a.matvec(&true_solution(n, seed)).unwrap();
        let rep = solve_fast(&a, &b).unwrap();
        prop_assert!(rep.relative_residual <= 1e-10, "{test} n={n}: {}", rep.relative_residual);
    }

    #[test]
    fn fast_matches_pivoted_lu(test in test_id(), n in 6usize..=64, seed in any::<u64>()) {
        let a = PentaToeplitz::from_bands(n, test.bands()).unwrap();
        let b = true_solution(n, seed);
        let xf = fast_solution(&a, &b).unwrap();
        let xp = plu_solution(&densify(&a).unwrap(), &b).unwrap();
        let diff: Vec<f64> = xf.iter().zip(&xp).map(|(p, q)| p - q).collect();
        prop_assert!(inf_norm(&diff) <= 1e-8 * inf_norm(&xp));
    }

    #[test]
    fn banded_lu_matches_pivoted_lu(test in test_id(), n in 6usize..=64, seed in any::<u64>()) {
        let a = PentaToeplitz::from_bands(n, test.bands()).unwrap();
        let b = true_solution(n, seed);
        if let (Ok(xb), Ok(xp)) = (banded_lu_solution(&a, &b), plu_solution(&densify(&a).unwrap(), &b)) {
            let diff: Vec<f64> = xb.iter().zip(&xp).map(|(p, q)| p - q).collect();
            prop_assert!(inf_norm(&diff) <= 1e-8 * inf_norm(&xp));
        }
    }

    // Strict diagonal dominance keeps the back-substitution recurrence contractive.
    #[test]
    fn triangular_forward_check(
        m in 4usize..=64,
        others in prop::array::uniform4(-1.0f64..1.0),
        extra in 1e-3f64..5.0,
        negative in any::<bool>(),
        c in prop::collection::vec(-1.0f64..1.0, 64),
    ) {
        let margin = others.iter().map(|v| v.abs()).sum::<f64>() + extra;
        let sigma = if negative { -margin } else { margin };
        let blk = UpperBandToeplitz::new(m, Bands::new(sigma, others[0], others[1], others[2], others[3])).unwrap();
        let c = &c[..m];
        prop_assume!(inf_norm(c) > 0.0);
        let y = tri_solve(&blk, c).unwrap();
        let diff: Vec<f64> = (0..m)
            .map(|i| (0..m).map(|j| blk.entry(i, j) * y[j]).sum::<f64>() - c[i])
            .collect();
        prop_assert!(penta_toeplitz::toeplitz::norm2(&diff) <= 1e-10 * penta_toeplitz::toeplitz::norm2(c));
    }

    #[test]
    fn partition_reconstructs_matrix(
        n in 6usize..=32,
        bands in prop::array::uniform5(-10.0f64..10.0),
    ) {
        prop_assume!(bands[0] != 0.0);
        let a = PentaToeplitz::new(n, bands[0], bands[1], bands[2], bands[3], bands[4]).unwrap();
        let b: Vec<f64> = (0..n).map(|i| i as f64).collect();
        let ps = partition(&a, &b).unwrap();
        for i in 0..n {
            let src = (i + 2) % n;
            let row: Vec<f64> = (0..n).map(|j| a.entry(src, j)).collect();
            prop_assert_eq!(ps.permuted_row(i), row);
        }
        prop_assert_eq!(&ps.b3[..], &b[2..]);
        prop_assert_eq!((ps.b1, ps.b2), (b[0], b[1]));
    }

    #[test]
    fn sparse_dots_are_exact(test in test_id(), n in 6usize..=200, seed in any::<u64>()) {
        let a = PentaToeplitz::from_bands(n, test.bands()).unwrap();
        let ps = partition(&a, &true_solution(n, seed)).unwrap();
        let iv = IntermediateSolves::compute(&ps).unwrap();
        for y in [&iv.u, &iv.v, &iv.z] {
            prop_assert_eq!(ps.w_dot(y), dense_dot(&ps.w, y));
            prop_assert_eq!(ps.s_dot(y), dense_dot(&ps.s, y));
        }
    }

    #[test]
    fn assemble_identity_exact(
        data in prop::collection::vec((-1000i32..1000, -1000i32..1000, -1000i32..1000), 4..40),
        p in -1000i32..1000,
        q in -1000i32..1000,
    ) {
        let u: Vec<f64> = data.iter().map(|t| t.0 as f64).collect();
        let v: Vec<f64> = data.iter().map(|t| t.1 as f64).collect();
        let z: Vec<f64> = data.iter().map(|t| t.2 as f64).collect();
        let (p, q) = (p as f64, q as f64);
        let x = assemble(&u, &v, &z, p, q).unwrap();
        let m = u.len();
        for i in 0..m {
            prop_assert_eq!(x[i] + p * v[i] + q * z[i], u[i]);
        }
        prop_assert_eq!((x[m], x[m + 1]), (p, q));
    }

    #[test]
    fn linearity(test in prop_oneof![Just(TestId::Test1), Just(TestId::Test3)], n in 6usize..=128, s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = PentaToeplitz::from_bands(n, test.bands()).unwrap();
        let b1 = true_solution(n, s1);
        let b2 = true_solution(n, s2);
        let sum: Vec<f64> = b1.iter().zip(&b2).map(|(p, q)| p + q).collect();
        let xs = fast_solution(&a, &sum).unwrap();
        let x1 = fast_solution(&a, &b1).unwrap();
        let x2 = fast_solution(&a, &b2).unwrap();
        let diff: Vec<f64> = (0..n).map(|i| xs[i] - (x1[i] + x2[i])).collect();
        prop_assert!(inf_norm(&diff) <= 1e-10 * inf_norm(&xs));
    }

    #[test]
    fn vector_file_roundtrip(v in prop::collection::vec(
        prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO, 0..200)
    ) {
        let mut buf = Vec::new();
        vecio::write_vector(&mut buf, &v).unwrap();
        let back = vecio::read_vector(buf.as_slice()).unwrap();
        prop_assert_eq!(back.len(), v.len());
        for (a, b) in v.iter().zip(&back) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}
