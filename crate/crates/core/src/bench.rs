//! Accuracy and timing grid over the three standard band parameter sets.
//!
//! Each case draws a true solution `x*` uniformly from `[0, 1)`, forms
//! `b = A x*`, then times every requested method over `reps` solves on the
//! same inputs. The reported relative error is that of the final solve.

use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::Instant;

use rand::{RngExt, SeedableRng};
use rand_pcg::Pcg64Mcg;
use serde::{Deserialize, Serialize};

use crate::baselines::{banded_lu_solution, densify, plu_solution};
use crate::error::{Error, Result};
use crate::solver::{fast_solution, Method, INSTABILITY_THRESHOLD, MIN_FAST_N};
use crate::toeplitz::{Bands, PentaToeplitz};

/// One of the three reference band parameter sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestId {
    Test1,
    Test2,
    Test3,
}

impl TestId {
    pub const ALL: [TestId; 3] = [TestId::Test1, TestId::Test2, TestId::Test3];

    pub fn bands(&self) -> Bands {
        match self {
            TestId::Test1 => Bands::new(5.0, 2.0, 4.0, 1.0, 3.0),
            TestId::Test2 => Bands::new(1.0, 0.2, 0.1, 0.2, 0.5),
            TestId::Test3 => Bands::new(28.0, 19.0, 17.0, 21.0, 25.0),
        }
    }

    pub fn index(&self) -> u64 {
        match self {
            TestId::Test1 => 1,
            TestId::Test2 => 2,
            TestId::Test3 => 3,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            TestId::Test1 => "test1",
            TestId::Test2 => "test2",
            TestId::Test3 => "test3",
        }
    }

    pub fn title(&self) -> String {
        format!("Test {}", self.index())
    }
}

impl fmt::Display for TestId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TestId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "1" | "test1" => Ok(TestId::Test1),
            "2" | "test2" => Ok(TestId::Test2),
            "3" | "test3" => Ok(TestId::Test3),
            other => Err(format!("unknown test `{other}` (expected 1, 2 or 3)")),
        }
    }
}

/// Uniform `[0, 1)` entries from a seeded PCG stream.
pub fn true_solution(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = Pcg64Mcg::seed_from_u64(seed);
    (0..n).map(|_| rng.random::<f64>()).collect()
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for one grid cell, stable across platforms and releases.
pub fn case_seed(seed: u64, test: TestId, n: usize) -> u64 {
    seed.wrapping_add(splitmix64((test.index() << 48) ^ n as u64))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchCase {
    pub test_id: TestId,
    pub n: usize,
    pub seed: u64,
    pub reps: usize,
    pub methods: Vec<Method>,
}

impl BenchCase {
    pub fn new(test_id: TestId, n: usize, seed: u64, reps: usize, methods: Vec<Method>) -> Self {
        Self {
            test_id,
            n,
            seed,
            reps,
            methods,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(Error::InvalidConfig("reps must be at least 1".into()));
        }
        if self.n == 0 {
            return Err(Error::EmptyDimension);
        }
        if self.n < MIN_FAST_N && self.methods.contains(&Method::Fast) {
            return Err(Error::InvalidConfig(format!(
                "the fast method needs n >= {MIN_FAST_N}, got {}",
                self.n
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Outcome {
    Measured {
        relative_error: f64,
        mean_time_seconds: f64,
    },
    Failed(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub test_id: TestId,
    pub n: usize,
    pub seed: u64,
    pub reps: usize,
    pub method: Method,
    pub outcome: Outcome,
}

impl BenchRecord {
    pub fn relative_error(&self) -> Option<f64> {
        match self.outcome {
            Outcome::Measured { relative_error, .. } => Some(relative_error),
            Outcome::Failed(_) => None,
        }
    }

    pub fn mean_time_seconds(&self) -> Option<f64> {
        match self.outcome {
            Outcome::Measured {
                mean_time_seconds, ..
            } => Some(mean_time_seconds),
            Outcome::Failed(_) => None,
        }
    }
}

/// Records keyed by `(test, n, method)`, at most one each.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BenchTable {
    records: Vec<BenchRecord>,
}

impl BenchTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Insert a record, replacing any existing one with the same key.
    pub fn insert(&mut self, record: BenchRecord) {
        let key = (record.test_id, record.n, record.method);
        match self
            .records
            .binary_search_by_key(&key, |r| (r.test_id, r.n, r.method))
        {
            Ok(i) => self.records[i] = record,
            Err(i) => self.records.insert(i, record),
        }
    }

    pub fn records(&self) -> &[BenchRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, test: TestId, n: usize, method: Method) -> Option<&BenchRecord> {
        self.records
            .iter()
            .find(|r| r.test_id == test && r.n == n && r.method == method)
    }
}

type Solver = fn(&Prepared, &[f64]) -> Result<Vec<f64>>;

struct Prepared {
    matrix: PentaToeplitz,
    dense: Option<crate::baselines::DenseMatrix>,
}

fn solve_fast_prepared(p: &Prepared, b: &[f64]) -> Result<Vec<f64>> {
    fast_solution(&p.matrix, b)
}

fn solve_plu_prepared(p: &Prepared, b: &[f64]) -> Result<Vec<f64>> {
    match &p.dense {
        Some(d) => plu_solution(d, b),
        None => Err(Error::TooLarge {
            n: p.matrix.n(),
            max: crate::baselines::MAX_DENSE_N,
        }),
    }
}

fn solve_banded_prepared(p: &Prepared, b: &[f64]) -> Result<Vec<f64>> {
    banded_lu_solution(&p.matrix, b)
}

fn measure(solver: Solver, prep: &Prepared, b: &[f64], reps: usize) -> Result<(f64, f64)> {
    // untimed warm-up
    solver(prep, b)?;
    let mut total = 0.0;
    let mut last = Vec::new();
    for _ in 0..reps {
        let start = Instant::now();
        last = solver(prep, b)?;
        total += start.elapsed().as_secs_f64();
    }
    let err = prep.matrix.relative_residual(&last, b)?;
    Ok((err, total / reps as f64))
}

/// Run every method of one case. Solver failures become `Outcome::Failed`.
pub fn run_case(case: &BenchCase) -> Result<Vec<BenchRecord>> {
    case.validate()?;
    let matrix = PentaToeplitz::from_bands(case.n, case.test_id.bands())?;
    let x_star = true_solution(case.n, case.seed);
    let b = matrix.matvec(&x_star)?;
    let dense = if case.methods.contains(&Method::Plu) {
        densify(&matrix).ok()
    } else {
        None
    };
    let prep = Prepared { matrix, dense };

    Ok(case
        .methods
        .iter()
        .map(|&method| {
            let solver: Solver = match method {
                Method::Fast => solve_fast_prepared,
                Method::Plu => solve_plu_prepared,
                Method::BandedLu => solve_banded_prepared,
            };
            let outcome = match measure(solver, &prep, &b, case.reps) {
                Ok((relative_error, mean_time_seconds)) => Outcome::Measured {
                    relative_error,
                    mean_time_seconds,
                },
                Err(e) => Outcome::Failed(e.to_string()),
            };
            BenchRecord {
                test_id: case.test_id,
                n: case.n,
                seed: case.seed,
                reps: case.reps,
                method,
                outcome,
            }
        })
        .collect())
}

/// Cartesian product of tests, sizes and methods, run sequentially.
pub fn run_suite(
    tests: &[TestId],
    sizes: &[usize],
    seed: u64,
    reps: usize,
    methods: &[Method],
) -> Result<BenchTable> {
    if tests.is_empty() || sizes.is_empty() || methods.is_empty() {
        return Err(Error::InvalidConfig(
            "tests, sizes and methods must be nonempty".into(),
        ));
    }
    let mut table = BenchTable::new();
    for &test in tests {
        for &n in sizes {
            let case = BenchCase::new(test, n, case_seed(seed, test, n), reps, methods.to_vec());
            for rec in run_case(&case)? {
                table.insert(rec);
            }
        }
    }
    Ok(table)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Markdown,
    Csv,
}

impl FromStr for TableFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "markdown" | "md" => Ok(TableFormat::Markdown),
            "csv" => Ok(TableFormat::Csv),
            other => Err(format!(
                "unknown table format `{other}` (expected markdown or csv)"
            )),
        }
    }
}

fn sci(v: f64) -> String {
    format!("{v:.3e}")
}

fn method_label(m: Method) -> &'static str {
    match m {
        Method::Fast => "New",
        Method::Plu => "PLU",
        Method::BandedLu => "LU",
    }
}

pub fn render_table(table: &BenchTable, format: TableFormat) -> String {
    match format {
        TableFormat::Csv => render_csv(table),
        TableFormat::Markdown => render_markdown(table),
    }
}

fn render_csv(table: &BenchTable) -> String {
    let mut out = String::from("test,n,method,relative_error,mean_time_seconds\n");
    for r in table.records() {
        let (err, time) = match r.outcome {
            Outcome::Measured {
                relative_error,
                mean_time_seconds,
            } => (sci(relative_error), sci(mean_time_seconds)),
            Outcome::Failed(_) => ("FAIL".to_string(), "FAIL".to_string()),
        };
        let _ = writeln!(out, "{},{},{},{},{}", r.test_id, r.n, r.method, err, time);
    }
    out
}

fn render_markdown(table: &BenchTable) -> String {
    let mut out = String::new();
    let mut tests: Vec<TestId> = table.records().iter().map(|r| r.test_id).collect();
    tests.dedup();
    for test in tests {
        let rows: Vec<&BenchRecord> = table
            .records()
            .iter()
            .filter(|r| r.test_id == test)
            .collect();
        let mut sizes: Vec<usize> = rows.iter().map(|r| r.n).collect();
        sizes.sort_unstable();
        sizes.dedup();
        let mut methods: Vec<Method> = rows.iter().map(|r| r.method).collect();
        methods.sort_unstable();
        methods.dedup();

        let b = test.bands();
        let _ = writeln!(
            out,
            "### {} (σ={}, λ={}, α={}, β={}, γ={})\n",
            test.title(),
            b.sigma,
            b.lambda,
            b.alpha,
            b.beta,
            b.gamma
        );
        let header: Vec<String> = sizes.iter().map(|n| format!("n={n}")).collect();
        let _ = writeln!(out, "| {} | | {} |", test.title(), header.join(" | "));
        let _ = writeln!(out, "|---|---|{}", "---|".repeat(sizes.len()));

        let cell = |m: Method, n: usize, pick: fn(&BenchRecord) -> Option<f64>| -> String {
            match table.get(test, n, m) {
                None => "-".to_string(),
                Some(r) => pick(r).map(sci).unwrap_or_else(|| "FAIL".to_string()),
            }
        };
        for (label, pick) in [
            (
                "Relative error",
                BenchRecord::relative_error as fn(&BenchRecord) -> Option<f64>,
            ),
            ("Time", BenchRecord::mean_time_seconds),
        ] {
            for (i, &m) in methods.iter().enumerate() {
                let cells: Vec<String> = sizes.iter().map(|&n| cell(m, n, pick)).collect();
                let lead = if i == 0 { label } else { "" };
                let _ = writeln!(
                    out,
                    "| {} | {} | {} |",
                    lead,
                    method_label(m),
                    cells.join(" | ")
                );
            }
        }

        let flagged: Vec<String> = rows
            .iter()
            .filter(|r| {
                r.relative_error()
                    .is_some_and(|e| e.is_nan() || e > INSTABILITY_THRESHOLD)
            })
            .map(|r| format!("{} at n={}", method_label(r.method), r.n))
            .collect();
        if !flagged.is_empty() {
            let _ = writeln!(
                out,
                "\nRelative error above {:e}: {}.",
                INSTABILITY_THRESHOLD,
                flagged.join(", ")
            );
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn true_solution_is_deterministic_and_uniform() {
        assert_eq!(true_solution(5, 11), true_solution(5, 11));
        assert_ne!(true_solution(5, 11), true_solution(5, 12));
        let big = true_solution(10_000, 3);
        assert!(big.iter().all(|&x| (0.0..1.0).contains(&x)));
        let mean = big.iter().sum::<f64>() / big.len() as f64;
        assert!((mean - 0.5).abs() <= 0.02, "mean {mean}");
    }

    #[test]
    fn case_seeds_differ_per_cell() {
        let a = case_seed(7, TestId::Test1, 128);
        assert_ne!(a, case_seed(7, TestId::Test1, 256));
        assert_ne!(a, case_seed(7, TestId::Test2, 128));
        assert_eq!(a, case_seed(7, TestId::Test1, 128));
    }

    #[test]
    fn test_id_parsing() {
        assert_eq!("2".parse::<TestId>().unwrap(), TestId::Test2);
        assert_eq!("test3".parse::<TestId>().unwrap(), TestId::Test3);
        assert!("4".parse::<TestId>().is_err());
    }

    #[test]
    fn case_validation() {
        let bad = BenchCase::new(TestId::Test1, 128, 0, 0, vec![Method::Fast]);
        assert!(matches!(run_case(&bad), Err(Error::InvalidConfig(_))));
        let small = BenchCase::new(TestId::Test1, 5, 0, 1, vec![Method::Fast]);
        assert!(matches!(run_case(&small), Err(Error::InvalidConfig(_))));
        let small_plu = BenchCase::new(TestId::Test1, 5, 0, 1, vec![Method::Plu]);
        assert_eq!(run_case(&small_plu).unwrap().len(), 1);
    }

    #[test]
    fn failures_are_recorded() {
        let case = BenchCase::new(TestId::Test1, 5000, 1, 1, vec![Method::Plu]);
        let recs = run_case(&case).unwrap();
        assert!(matches!(recs[0].outcome, Outcome::Failed(_)));
        let mut t = BenchTable::new();
        t.insert(recs[0].clone());
        assert_eq!(
            render_table(&t, TableFormat::Csv).lines().nth(1),
            Some("test1,5000,plu,FAIL,FAIL")
        );
        assert!(render_table(&t, TableFormat::Markdown).contains("FAIL"));
    }

    #[test]
    fn csv_formatting() {
        let mut t = BenchTable::new();
        assert_eq!(
            render_table(&t, TableFormat::Csv),
            "test,n,method,relative_error,mean_time_seconds\n"
        );
        t.insert(BenchRecord {
            test_id: TestId::Test1,
            n: 128,
            seed: 0,
            reps: 10,
            method: Method::Fast,
            outcome: Outcome::Measured {
                relative_error: 1e-16,
                mean_time_seconds: 1.5e-4,
            },
        });
        assert_eq!(
            render_table(&t, TableFormat::Csv).lines().nth(1),
            Some("test1,128,fast,1.000e-16,1.500e-4")
        );
    }

    #[test]
    fn insert_replaces_same_key() {
        let mk = |e: f64| BenchRecord {
            test_id: TestId::Test2,
            n: 64,
            seed: 0,
            reps: 1,
            method: Method::Plu,
            outcome: Outcome::Measured {
                relative_error: e,
                mean_time_seconds: 0.0,
            },
        };
        let mut t = BenchTable::new();
        t.insert(mk(1.0));
        t.insert(mk(2.0));
        assert_eq!(t.len(), 1);
        assert_eq!(t.records()[0].relative_error(), Some(2.0));
    }

    #[test]
    fn minimal_suite() {
        let t = run_suite(&[TestId::Test1], &[128], 5, 1, &[Method::Fast]).unwrap();
        assert_eq!(t.len(), 1);
        assert!(t.records()[0].relative_error().unwrap() <= 1e-12);
        assert!(run_suite(&[], &[128], 5, 1, &[Method::Fast]).is_err());
    }
}
