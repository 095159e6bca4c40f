//! Command-line front end: `solve`, `bench` and `gen`.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::baselines::{banded_lu_solve, densify, plu_solve};
use crate::bench::{render_table, run_suite, true_solution, TableFormat, TestId};
use crate::error::Error;
use crate::solver::{solve_fast, Method, SolveReport, MIN_FAST_N};
use crate::toeplitz::{Bands, PentaToeplitz};
use crate::vecio::{self, VecIoError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "pentasolve", version, about = "Pentadiagonal Toeplitz solver")]
struct RawCli {
    #[command(subcommand)]
    command: RawCommand,
}

#[derive(Subcommand, Debug)]
enum RawCommand {
    /// Solve A x = b
    Solve(RawSolve),
    /// Run the accuracy/timing grid
    Bench(RawBench),
    /// Write b = A x* for a chosen x*
    Gen(RawGen),
}

#[derive(Args, Debug)]
struct MatrixArgs {
    /// Matrix dimension
    #[arg(long)]
    n: Option<usize>,
    /// Band preset: 1, 2 or 3
    #[arg(long)]
    test: Option<String>,
    /// Second sub-diagonal
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<f64>,
    /// First sub-diagonal
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<f64>,
    /// Main diagonal
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// First super-diagonal
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    /// Second super-diagonal
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<f64>,
}

#[derive(Args, Debug)]
struct RawSolve {
    #[command(flatten)]
    matrix: MatrixArgs,
    /// fast, plu or banded_lu
    #[arg(long, default_value = "fast")]
    method: String,
    /// Read b from a vector file
    #[arg(long, value_name = "PATH", group = "rhs")]
    rhs_file: Option<PathBuf>,
    /// b = all ones
    #[arg(long, group = "rhs")]
    rhs_ones: bool,
    /// b uniform on [0, 1) from SEED
    #[arg(long, value_name = "SEED", group = "rhs")]
    rhs_random: Option<u64>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// text, csv, markdown or json
    #[arg(long, default_value = "text")]
    format: String,
}

#[derive(Args, Debug)]
struct RawBench {
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    tests: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "128,256,512")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_delimiter = ',', default_value = "fast,plu")]
    methods: Vec<String>,
    /// markdown or csv
    #[arg(long, default_value = "markdown")]
    format: String,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RawGen {
    #[command(flatten)]
    matrix: MatrixArgs,
    /// Read x* from a vector file
    #[arg(long, value_name = "PATH", group = "xsrc")]
    x_file: Option<PathBuf>,
    /// x* = all ones
    #[arg(long, group = "xsrc")]
    x_ones: bool,
    /// x* uniform on [0, 1) from SEED
    #[arg(long, value_name = "SEED", group = "xsrc")]
    x_random: Option<u64>,
    /// Where to write b
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Also write x* here
    #[arg(long, value_name = "PATH")]
    x_out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum VectorSource {
    File(PathBuf),
    Ones,
    Random(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Csv,
    Markdown,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "csv" => Ok(OutputFormat::Csv),
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!(
                "unknown format `{other}` (expected text, csv, markdown or json)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveConfig {
    pub matrix: PentaToeplitz,
    pub method: Method,
    pub rhs: VectorSource,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub tests: Vec<TestId>,
    pub sizes: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
    pub methods: Vec<Method>,
    pub format: TableFormat,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub matrix: PentaToeplitz,
    pub x: VectorSource,
    pub output: Option<PathBuf>,
    pub x_output: Option<PathBuf>,
}

/// A validated command line.
#[derive(Debug, Clone, PartialEq)]
pub enum CliConfig {
    Solve(SolveConfig),
    Bench(BenchConfig),
    Gen(GenConfig),
}

/// Usage problems, or a help/version request that should exit cleanly.
#[derive(Debug)]
pub enum ParseOutcome {
    Usage(String),
    Info(String),
}

fn usage<T>(msg: impl Into<String>) -> Result<T, ParseOutcome> {
    Err(ParseOutcome::Usage(msg.into()))
}

fn parse_list<T: FromStr<Err = String>>(
    flag: &str,
    items: &[String],
) -> Result<Vec<T>, ParseOutcome> {
    items
        .iter()
        .map(|s| {
            s.parse::<T>()
                .map_err(|e| ParseOutcome::Usage(format!("--{flag}: {e}")))
        })
        .collect()
}

fn build_matrix(args: &MatrixArgs) -> Result<PentaToeplitz, ParseOutcome> {
    let Some(n) = args.n else {
        return usage("missing required parameter --n");
    };
    let preset = match &args.test {
        Some(t) => Some(
            t.parse::<TestId>()
                .map_err(|e| ParseOutcome::Usage(format!("--test: {e}")))?
                .bands(),
        ),
        None => None,
    };
    let pick = |flag: &str, given: Option<f64>, preset: Option<f64>| -> Result<f64, ParseOutcome> {
        given.or(preset).ok_or_else(|| {
            ParseOutcome::Usage(format!(
                "missing required parameter --{flag} (or use --test 1|2|3)"
            ))
        })
    };
    let bands = Bands::new(
        pick("sigma", args.sigma, preset.map(|b| b.sigma))?,
        pick("lambda", args.lambda, preset.map(|b| b.lambda))?,
        pick("alpha", args.alpha, preset.map(|b| b.alpha))?,
        pick("beta", args.beta, preset.map(|b| b.beta))?,
        pick("gamma", args.gamma, preset.map(|b| b.gamma))?,
    );
    PentaToeplitz::from_bands(n, bands).map_err(|e| match e {
        Error::EmptyDimension => ParseOutcome::Usage("--n: must be at least 1".into()),
        Error::NonFinite(name) => ParseOutcome::Usage(format!("--{name}: value must be finite")),
        other => ParseOutcome::Usage(other.to_string()),
    })
}

fn source(
    file: Option<PathBuf>,
    ones: bool,
    random: Option<u64>,
    prefix: &str,
) -> Result<VectorSource, ParseOutcome> {
    match (file, ones, random) {
        (Some(p), false, None) => Ok(VectorSource::File(p)),
        (None, true, None) => Ok(VectorSource::Ones),
        (None, false, Some(s)) => Ok(VectorSource::Random(s)),
        (None, false, None) => usage(format!(
            "missing required parameter: one of --{prefix}-file, --{prefix}-ones, --{prefix}-random"
        )),
        _ => usage(format!(
            "only one of --{prefix}-file, --{prefix}-ones, --{prefix}-random may be given"
        )),
    }
}

/// Parse and validate `argv` (including the program name).
pub fn parse_args<I, S>(argv: I) -> Result<CliConfig, ParseOutcome>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let raw = RawCli::try_parse_from(argv).map_err(|e| {
        use clap::error::ErrorKind;
        match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ParseOutcome::Info(e.to_string()),
            _ => ParseOutcome::Usage(e.to_string()),
        }
    })?;

    match raw.command {
        RawCommand::Solve(s) => {
            let matrix = build_matrix(&s.matrix)?;
            let method = s
                .method
                .parse::<Method>()
                .map_err(|e| ParseOutcome::Usage(format!("--method: {e}")))?;
            if method == Method::Fast && matrix.n() < MIN_FAST_N {
                return usage(format!(
                    "--n: the fast method requires n >= {MIN_FAST_N}, got {} (use --method plu or banded_lu)",
                    matrix.n()
                ));
            }
            let format = s
                .format
                .parse::<OutputFormat>()
                .map_err(|e| ParseOutcome::Usage(format!("--format: {e}")))?;
            let rhs = source(s.rhs_file, s.rhs_ones, s.rhs_random, "rhs")?;
            Ok(CliConfig::Solve(SolveConfig {
                matrix,
                method,
                rhs,
                output: s.out,
                format,
            }))
        }
        RawCommand::Bench(b) => {
            let tests = parse_list::<TestId>("tests", &b.tests)?;
            let methods = parse_list::<Method>("methods", &b.methods)?;
            let format = b
                .format
                .parse::<TableFormat>()
                .map_err(|e| ParseOutcome::Usage(format!("--format: {e}")))?;
            if b.reps == 0 {
                return usage("--reps: must be at least 1");
            }
            if b.sizes.contains(&0) {
                return usage("--sizes: every size must be at least 1");
            }
            if methods.contains(&Method::Fast) && b.sizes.iter().any(|&n| n < MIN_FAST_N) {
                return usage(format!(
                    "--sizes: the fast method requires n >= {MIN_FAST_N}"
                ));
            }
            Ok(CliConfig::Bench(BenchConfig {
                tests,
                sizes: b.sizes,
                reps: b.reps,
                seed: b.seed,
                methods,
                format,
                output: b.out,
            }))
        }
        RawCommand::Gen(g) => {
            let matrix = build_matrix(&g.matrix)?;
            let x = source(g.x_file, g.x_ones, g.x_random, "x")?;
            Ok(CliConfig::Gen(GenConfig {
                matrix,
                x,
                output: g.out,
                x_output: g.x_out,
            }))
        }
    }
}

#[derive(Debug)]
enum RunError {
    Usage(String),
    Numerical(String),
    Io(String),
}

impl RunError {
    fn code(&self) -> i32 {
        match self {
            RunError::Usage(_) => EXIT_USAGE,
            RunError::Numerical(_) => EXIT_NUMERICAL,
            RunError::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            RunError::Usage(m) | RunError::Numerical(m) | RunError::Io(m) => m,
        }
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            RunError::Numerical(e.to_string())
        } else {
            RunError::Usage(e.to_string())
        }
    }
}

fn io_err(path: Option<&Path>) -> impl Fn(io::Error) -> RunError + '_ {
    move |e| match path {
        Some(p) => RunError::Io(format!("{}: {e}", p.display())),
        None => RunError::Io(e.to_string()),
    }
}

fn load_source(src: &VectorSource, n: usize) -> Result<Vec<f64>, RunError> {
    let v = match src {
        VectorSource::Ones => vec![1.0; n],
        VectorSource::Random(seed) => true_solution(n, *seed),
        VectorSource::File(path) => vecio::load(path).map_err(|e| match e {
            VecIoError::Io(e) => RunError::Io(format!("{}: {e}", path.display())),
            parse => RunError::Io(format!("{}: {parse}", path.display())),
        })?,
    };
    if v.len() != n {
        return Err(RunError::Usage(format!(
            "vector has {} entries but --n is {n}",
            v.len()
        )));
    }
    Ok(v)
}

fn write_to(path: Option<&Path>, stdout: &mut dyn Write, body: &[u8]) -> Result<(), RunError> {
    match path {
        Some(p) => {
            let mut f = BufWriter::new(File::create(p).map_err(io_err(Some(p)))?);
            f.write_all(body).map_err(io_err(Some(p)))?;
            f.flush().map_err(io_err(Some(p)))
        }
        None => stdout.write_all(body).map_err(io_err(None)),
    }
}

#[derive(Serialize)]
struct JsonSolve<'a> {
    method: Method,
    n: usize,
    relative_residual: f64,
    elapsed_seconds: f64,
    unstable: bool,
    x: &'a [f64],
}

fn summary_line(rep: &SolveReport, n: usize) -> String {
    format!(
        "{}, {}, {:.3e}, {:.3e}",
        rep.method, n, rep.relative_residual, rep.elapsed_seconds
    )
}

fn render_solution(rep: &SolveReport, n: usize, format: OutputFormat) -> Result<Vec<u8>, RunError> {
    let mut body = Vec::new();
    match format {
        OutputFormat::Text => {
            vecio::write_vector(&mut body, &rep.x).map_err(io_err(None))?;
        }
        OutputFormat::Csv => {
            body.extend_from_slice(b"i,x\n");
            for (i, x) in rep.x.iter().enumerate() {
                body.extend_from_slice(
                    format!("{},{}\n", i + 1, vecio::format_value(*x)).as_bytes(),
                );
            }
        }
        OutputFormat::Markdown => {
            body.extend_from_slice(b"| i | x |\n|---|---|\n");
            for (i, x) in rep.x.iter().enumerate() {
                body.extend_from_slice(
                    format!("| {} | {} |\n", i + 1, vecio::format_value(*x)).as_bytes(),
                );
            }
        }
        OutputFormat::Json => {
            let doc = JsonSolve {
                method: rep.method,
                n,
                relative_residual: rep.relative_residual,
                elapsed_seconds: rep.elapsed_seconds,
                unstable: rep.unstable,
                x: &rep.x,
            };
            serde_json::to_writer_pretty(&mut body, &doc)
                .map_err(|e| RunError::Io(e.to_string()))?;
            body.push(b'\n');
        }
    }
    Ok(body)
}

fn run_solve(
    cfg: &SolveConfig,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), RunError> {
    let a = &cfg.matrix;
    let n = a.n();
    let b = load_source(&cfg.rhs, n)?;
    let rep = match cfg.method {
        Method::Fast => solve_fast(a, &b)?,
        Method::Plu => plu_solve(&densify(a)?, &b)?,
        Method::BandedLu => banded_lu_solve(a, &b)?,
    };
    let body = render_solution(&rep, n, cfg.format)?;
    write_to(cfg.output.as_deref(), stdout, &body)?;
    if cfg.format != OutputFormat::Json || cfg.output.is_some() {
        // '#' keeps text output readable as a vector file
        writeln!(stdout, "# {}", summary_line(&rep, n)).map_err(io_err(None))?;
    }
    if rep.unstable {
        let _ = writeln!(
            stderr,
            "warning: relative residual {:.3e} exceeds {:e}; solution is unreliable",
            rep.relative_residual,
            crate::solver::INSTABILITY_THRESHOLD
        );
    }
    Ok(())
}

fn run_bench(cfg: &BenchConfig, stdout: &mut dyn Write) -> Result<(), RunError> {
    let table = run_suite(&cfg.tests, &cfg.sizes, cfg.seed, cfg.reps, &cfg.methods)?;
    let text = render_table(&table, cfg.format);
    write_to(cfg.output.as_deref(), stdout, text.as_bytes())
}

fn run_gen(cfg: &GenConfig, stdout: &mut dyn Write) -> Result<(), RunError> {
    let n = cfg.matrix.n();
    let x = load_source(&cfg.x, n)?;
    let b = cfg.matrix.matvec(&x)?;
    if let Some(p) = &cfg.x_output {
        vecio::save(p, &x).map_err(io_err(Some(p)))?;
    }
    let mut body = Vec::new();
    vecio::write_vector(&mut body, &b).map_err(io_err(None))?;
    write_to(cfg.output.as_deref(), stdout, &body)
}

/// Execute a validated command, returning the process exit code.
pub fn run(config: &CliConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let result = match config {
        CliConfig::Solve(c) => run_solve(c, stdout, stderr),
        CliConfig::Bench(c) => run_bench(c, stdout),
        CliConfig::Gen(c) => run_gen(c, stdout),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            e.code()
        }
    }
}

/// Parse `argv` and run it.
pub fn main_with<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    match parse_args(argv) {
        Ok(cfg) => run(&cfg, stdout, stderr),
        Err(ParseOutcome::Info(text)) => {
            let _ = write!(stdout, "{text}");
            EXIT_OK
        }
        Err(ParseOutcome::Usage(msg)) => {
            let msg = msg.trim_end();
            let msg = msg.strip_prefix("error: ").unwrap_or(msg);
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
    }
}
