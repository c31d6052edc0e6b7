//! Plain-text matrices.
//!
//! ```text
//! d p k
//! c_0 c_1 ... c_k      (only when k >= 2: modulus, low degree first)
//! row 1
//! ...
//! ```
//!
//! Each row holds `d` element codes. A square matrix has `d` rows; a
//! subspace basis has one row per basis vector. Files holding several
//! matrices separate them by blank lines; `#` starts a comment.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::subspace::Subspace;

fn header(field: &Field, d: usize) -> String {
    let mut s = format!("{} {} {}\n", d, field.p(), field.k());
    if let Some(m) = field.modulus() {
        s.push_str(&join(m));
        s.push('\n');
    }
    s
}

fn join(xs: &[u32]) -> String {
    xs.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

/// Rows of `m` under a header naming its column count.
pub fn write_rows(m: &Matrix) -> String {
    let mut s = header(m.field(), m.cols());
    for r in m.row_vectors() {
        s.push_str(&join(r));
        s.push('\n');
    }
    s
}

pub fn write_matrix(m: &Matrix) -> String {
    write_rows(m)
}

pub fn write_subspace(w: &Subspace) -> String {
    write_rows(w.basis())
}

pub fn write_poly(f: &Poly) -> String {
    join(f.coeffs())
}

/// Lines of one block, with 1-based line numbers.
type Block<'a> = Vec<(usize, &'a str)>;

fn blocks(text: &str) -> Vec<Block<'_>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            if !cur.is_empty() && raw.trim().is_empty() {
                out.push(std::mem::take(&mut cur));
            }
            continue;
        }
        cur.push((i + 1, line));
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn numbers(line: usize, s: &str) -> Result<Vec<u64>> {
    s.split_whitespace()
        .map(|t| t.parse::<u64>().map_err(|_| err(line, format!("expected a non-negative integer, found {t:?}"))))
        .collect()
}

/// Parses one block into its field, width, and rows.
fn parse_block(block: &Block<'_>) -> Result<(Field, usize, Vec<Vec<u32>>)> {
    let mut it = block.iter();
    let &(hl, h) = it.next().ok_or_else(|| err(1, "empty input"))?;
    let head = numbers(hl, h)?;
    let [d, p, k] = head[..] else {
        return Err(err(hl, "header must be \"d p k\""));
    };
    if d == 0 {
        return Err(err(hl, "dimension must be positive"));
    }
    let field = if k >= 2 {
        let &(ml, m) = it.next().ok_or_else(|| err(hl, "missing modulus line"))?;
        let mut coeffs: Vec<u32> = numbers(ml, m)?.into_iter().map(|c| c as u32).collect();
        if coeffs.len() == k as usize {
            coeffs.push(1);
        }
        if coeffs.len() != k as usize + 1 {
            return Err(err(ml, format!("modulus needs {} coefficients", k + 1)));
        }
        Field::with_modulus(p, &coeffs).map_err(|e| err(ml, e.to_string()))?
    } else {
        Field::new(p, k as u32).map_err(|e| err(hl, e.to_string()))?
    };
    let mut rows = Vec::new();
    for &(l, s) in it {
        let row = numbers(l, s)?;
        if row.len() != d as usize {
            return Err(err(l, format!("expected {d} entries, found {}", row.len())));
        }
        let row = row.into_iter().map(|x| field.check(x).map_err(|e| err(l, e.to_string()))).collect::<Result<_>>()?;
        rows.push(row);
    }
    Ok((field, d as usize, rows))
}

fn to_matrix(block: &Block<'_>) -> Result<Matrix> {
    let (field, d, rows) = parse_block(block)?;
    if rows.len() != d {
        let last = block.last().map_or(1, |b| b.0);
        return Err(err(last, format!("expected {d} rows, found {}", rows.len())));
    }
    Matrix::from_rows(&field, &rows)
}

/// Exactly one square matrix.
pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let bs = blocks(text);
    match bs.len() {
        0 => Err(err(1, "empty input")),
        1 => to_matrix(&bs[0]),
        _ => Err(err(bs[1][0].0, "expected a single matrix")),
    }
}

/// Every square matrix in a blank-line separated file.
pub fn parse_matrices(text: &str) -> Result<Vec<Matrix>> {
    blocks(text).iter().map(to_matrix).collect()
}

/// Exactly two square matrices over one field.
pub fn parse_pair(text: &str) -> Result<(Matrix, Matrix)> {
    let bs = blocks(text);
    if bs.len() != 2 {
        let line = bs.get(2).map_or(text.lines().count().max(1), |b| b[0].0);
        return Err(err(line, format!("expected two matrices, found {}", bs.len())));
    }
    let (a, b) = (to_matrix(&bs[0])?, to_matrix(&bs[1])?);
    if a.field() != b.field() || a.rows() != b.rows() {
        return Err(err(bs[1][0].0, "matrices of a pair must share field and dimension"));
    }
    Ok((a, b))
}

/// A subspace given by spanning rows.
pub fn parse_subspace(text: &str) -> Result<Subspace> {
    let bs = blocks(text);
    let b = bs.first().ok_or_else(|| err(1, "empty input"))?;
    let (field, d, rows) = parse_block(b)?;
    Subspace::span(&field, d, &rows)
}
