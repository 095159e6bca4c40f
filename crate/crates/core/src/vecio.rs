//! Plain-text vector files: one decimal number per line, `#` comments.
//!
//! Values are written with 17 significant digits, which round-trips every
//! finite `f64` exactly.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum VecIoError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: cannot parse `{text}` as a number")]
    Parse { line: usize, text: String },
}

pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_vector<W: Write>(mut out: W, v: &[f64]) -> io::Result<()> {
    for x in v {
        writeln!(out, "{}", format_value(*x))?;
    }
    out.flush()
}

pub fn read_vector<R: BufRead>(input: R) -> Result<Vec<f64>, VecIoError> {
    let mut v = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let x = t.parse::<f64>().map_err(|_| VecIoError::Parse {
            line: idx + 1,
            text: t.to_string(),
        })?;
        v.push(x);
    }
    Ok(v)
}

pub fn save(path: &Path, v: &[f64]) -> io::Result<()> {
    write_vector(BufWriter::new(File::create(path)?), v)
}

pub fn load(path: &Path) -> Result<Vec<f64>, VecIoError> {
    read_vector(BufReader::new(File::open(path)?))
}
