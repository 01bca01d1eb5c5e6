//! Plain-text matrix files.
//!
//! ```text
//! 2 2
//! 1 0
//! 0 0
//! 0 0
//! 1 0
//! ```
//!
//! The first line holds `rows cols`; then one `re im` line per entry in
//! row-major order. Blank lines are ignored. NaN and infinities are rejected.

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::numfmt::fmt_g17;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn parse_finite(tok: &str, line: usize) -> Result<f64> {
    let x: f64 = tok.parse().map_err(|_| parse_err(line, format!("not a number: {tok:?}")))?;
    if !x.is_finite() {
        return Err(parse_err(line, format!("non-finite value: {tok:?}")));
    }
    Ok(x)
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    if dims.len() != 2 {
        return Err(parse_err(hline, "expected \"rows cols\""));
    }
    let parse_dim = |tok: &str| -> Result<usize> {
        match tok.parse::<usize>() {
            Ok(v) if v > 0 => Ok(v),
            _ => Err(parse_err(hline, format!("invalid dimension {tok:?}"))),
        }
    };
    let rows = parse_dim(dims[0])?;
    let cols = parse_dim(dims[1])?;

    let mut entries = Vec::with_capacity(rows * cols);
    let mut last_line = hline;
    for (lineno, line) in lines {
        last_line = lineno;
        if entries.len() == rows * cols {
            return Err(parse_err(lineno, format!("more than {} entries", rows * cols)));
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(parse_err(lineno, "expected \"re im\""));
        }
        entries.push(C64::new(parse_finite(toks[0], lineno)?, parse_finite(toks[1], lineno)?));
    }
    if entries.len() != rows * cols {
        return Err(parse_err(
            last_line + 1,
            format!("expected {} entries, found {}", rows * cols, entries.len()),
        ));
    }
    ComplexMatrix::new(rows, cols, entries)
}

pub fn write_matrix(m: &ComplexMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for z in m.entries() {
        out.push_str(&fmt_g17(z.re));
        out.push(' ');
        out.push_str(&fmt_g17(z.im));
        out.push('\n');
    }
    out
}
