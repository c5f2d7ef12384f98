//! Plain-text matrix fixtures.
//!
//! A file starts with a dimension header `(a, b)` and is followed by any
//! number of row-major matrix blocks. Entries may be separated by commas or
//! whitespace; blank lines and lines starting with `#` are ignored.
//!
//! * Signature-form files: header `(p, q)`, blocks are `n×n` with `n = p + q`.
//! * Grassmann files: header `(n, p)`, blocks are `n×p` bases.

use std::fmt::Write as _;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::grassmann::GrassPoint;
use crate::scalar::Real;
use crate::sigspace::{SigMatrix, SignatureForm};

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines { inner: text.lines().enumerate() }
    }
}

impl<'a> Iterator for Lines<'a> {
    type Item = (usize, &'a str);

    fn next(&mut self) -> Option<Self::Item> {
        for (i, line) in self.inner.by_ref() {
            let t = line.trim();
            if !t.is_empty() && !t.starts_with('#') {
                return Some((i + 1, t));
            }
        }
        None
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn parse_header(line: usize, text: &str) -> Result<(usize, usize)> {
    let inner = text
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| parse_err(line, format!("expected header '(a, b)', got '{text}'")))?;
    let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(parse_err(line, "header needs exactly two entries"));
    }
    let a = usize::from_str(parts[0]).map_err(|e| parse_err(line, e.to_string()))?;
    let b = usize::from_str(parts[1]).map_err(|e| parse_err(line, e.to_string()))?;
    Ok((a, b))
}

fn parse_row<T: Real>(line: usize, text: &str, cols: usize) -> Result<Vec<T>> {
    let row: Vec<T> = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| f64::from_str(s).map(T::lit).map_err(|e| parse_err(line, format!("'{s}': {e}"))))
        .collect::<Result<_>>()?;
    if row.len() != cols {
        return Err(parse_err(line, format!("expected {cols} entries, found {}", row.len())));
    }
    Ok(row)
}

/// Header plus every `rows×cols` block in the text.
fn read_blocks<T: Real>(
    text: &str,
    shape: impl Fn(usize, usize) -> (usize, usize),
) -> Result<((usize, usize), Vec<DMatrix<T>>)> {
    let mut lines = Lines::new(text);
    let (hline, htext) = lines.next().ok_or_else(|| parse_err(0, "missing header"))?;
    let header = parse_header(hline, htext)?;
    let (rows, cols) = shape(header.0, header.1);
    if rows == 0 || cols == 0 {
        return Err(parse_err(hline, "dimensions must be positive"));
    }
    let mut blocks = Vec::new();
    let mut current: Vec<T> = Vec::with_capacity(rows * cols);
    let mut last_line = hline;
    for (line, t) in lines {
        last_line = line;
        current.extend(parse_row::<T>(line, t, cols)?);
        if current.len() == rows * cols {
            blocks.push(DMatrix::from_row_slice(rows, cols, &current));
            current.clear();
        }
    }
    if !current.is_empty() {
        return Err(parse_err(last_line, "truncated matrix block"));
    }
    Ok((header, blocks))
}

fn write_block<T: Real>(out: &mut String, m: &DMatrix<T>) {
    for i in 0..m.nrows() {
        let row: Vec<String> = m.row(i).iter().map(|x| format!("{:.17e}", x.as_f64())).collect();
        let _ = writeln!(out, "{}", row.join(", "));
    }
}

/// Parses a `(p, q)` file of symmetric matrices with that signature form.
pub fn read_sig_matrices<T: Real>(text: &str) -> Result<(SignatureForm, Vec<SigMatrix<T>>)> {
    let ((p, q), blocks) = read_blocks::<T>(text, |p, q| (p + q, p + q))?;
    let form = SignatureForm::new(p, q)?;
    let mats = blocks.into_iter().map(|m| SigMatrix::new(m, form)).collect::<Result<_>>()?;
    Ok((form, mats))
}

pub fn write_sig_matrices<T: Real>(form: SignatureForm, mats: &[SigMatrix<T>]) -> String {
    let mut out = format!("({}, {})\n", form.p, form.q);
    for (i, m) in mats.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        write_block(&mut out, m.matrix());
    }
    out
}

/// Parses an `(n, p)` file of orthonormal bases.
pub fn read_grass_points<T: Real>(text: &str) -> Result<((usize, usize), Vec<GrassPoint<T>>)> {
    let (dims, blocks) = read_blocks::<T>(text, |n, p| (n, p))?;
    let pts = blocks.into_iter().map(GrassPoint::new).collect::<Result<_>>()?;
    Ok((dims, pts))
}

pub fn write_grass_points<T: Real>(points: &[GrassPoint<T>]) -> Result<String> {
    let first = points.first().ok_or_else(|| Error::Shape("no points to write".into()))?;
    let (n, p) = (first.n(), first.p());
    let mut out = format!("({n}, {p})\n");
    for (i, g) in points.iter().enumerate() {
        if (g.n(), g.p()) != (n, p) {
            return Err(Error::Shape(format!("point {i} is {}x{}, expected {n}x{p}", g.n(), g.p())));
        }
        if i > 0 {
            out.push('\n');
        }
        write_block(&mut out, g.basis());
    }
    Ok(out)
}
