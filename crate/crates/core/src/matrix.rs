//! Dense matrices over a [`Field`], row-major. Vectors are rows and act on
//! the right: `v -> vA`.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::Poly;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field: field.clone(), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Row-major data with validated element codes.
    pub fn from_vec(field: &Field, rows: usize, cols: usize, data: Vec<u32>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        for &c in &data {
            field.check(c as u64)?;
        }
        Ok(Matrix { field: field.clone(), rows, cols, data })
    }

    pub fn from_rows(field: &Field, rows: &[Vec<u32>]) -> Result<Matrix> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Matrix::from_vec(field, rows.len(), cols, rows.concat())
    }

    pub(crate) fn from_raw(field: &Field, rows: usize, cols: usize, data: Vec<u32>) -> Matrix {
        debug_assert_eq!(data.len(), rows * cols);
        Matrix { field: field.clone(), rows, cols, data }
    }

    /// Diagonal blocks placed along the diagonal.
    pub fn block_diag(blocks: &[&Matrix]) -> Matrix {
        let field = blocks[0].field.clone();
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut m = Matrix::zeros(&field, n, n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(off + i, off + j, b.get(i, j));
                }
            }
            off += b.rows;
        }
        m
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> impl Iterator<Item = &[u32]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == u32::from(i == j)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn try_mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.mul(other))
    }

    /// Matrix product; panics on incompatible shapes.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "incompatible shapes");
        let f = &self.field;
        let mut out = vec![0u32; self.rows * other.cols];
        for i in 0..self.rows {
            let dst = &mut out[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                let src = other.row(k);
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d = f.add(*d, f.mul(a, b));
                }
            }
        }
        Matrix::from_raw(f, self.rows, other.cols, out)
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.rows, "vector length");
        let f = &self.field;
        let mut out = vec![0u32; self.cols];
        for (k, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (d, &b) in out.iter_mut().zip(self.row(k)) {
                *d = f.add(*d, f.mul(a, b));
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "incompatible shapes");
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Matrix::from_raw(f, self.rows, self.cols, data)
    }

    pub fn scale(&self, c: u32) -> Matrix {
        let data = self.data.iter().map(|&a| self.field.mul(a, c)).collect();
        Matrix::from_raw(&self.field, self.rows, self.cols, data)
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        assert!(self.is_square());
        let mut acc = Matrix::identity(&self.field, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// `row[dst] -= c * row[src]`
    fn axpy_row(&mut self, dst: usize, src: usize, c: u32, from_col: usize) {
        let f = &self.field;
        for j in from_col..self.cols {
            let s = self.data[src * self.cols + j];
            if s != 0 {
                let d = &mut self.data[dst * self.cols + j];
                *d = f.sub(*d, f.mul(c, s));
            }
        }
    }

    fn scale_row(&mut self, r: usize, c: u32) {
        for j in 0..self.cols {
            let v = &mut self.data[r * self.cols + j];
            *v = self.field.mul(*v, c);
        }
    }

    /// Reduces in place to reduced row echelon form; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(i) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            self.swap_rows(i, r);
            let inv = self.field.inv(self.get(r, c));
            self.scale_row(r, inv);
            for i in 0..self.rows {
                let t = self.get(i, c);
                if i != r && t != 0 {
                    self.axpy_row(i, r, t, c);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn det(&self) -> Result<u32> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let f = &self.field;
        let n = self.rows;
        let mut m = self.clone();
        let mut det = 1u32;
        for c in 0..n {
            let Some(i) = (c..n).find(|&i| m.get(i, c) != 0) else {
                return Ok(0);
            };
            if i != c {
                m.swap_rows(i, c);
                det = f.neg(det);
            }
            let piv = m.get(c, c);
            det = f.mul(det, piv);
            let inv = f.inv(piv);
            for r in c + 1..n {
                let t = m.get(r, c);
                if t != 0 {
                    m.axpy_row(r, c, f.mul(t, inv), c);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(&self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Singular);
        }
        let mut out = Matrix::zeros(&self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, aug.get(i, n + j));
            }
        }
        Ok(out)
    }

    /// Right null space `{x : A x = 0}` as the rows of an RREF basis matrix.
    pub fn kernel(&self) -> Matrix {
        let f = &self.field;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Matrix::zeros(f, free.len(), self.cols);
        for (k, &fc) in free.iter().enumerate() {
            basis.set(k, fc, 1);
            for (i, &pc) in pivots.iter().enumerate() {
                basis.set(k, pc, f.neg(r.get(i, fc)));
            }
        }
        basis.rref_in_place();
        basis
    }

    /// Left null space `{v : v A = 0}`, the kernel of the row action.
    pub fn left_kernel(&self) -> Matrix {
        self.transpose().kernel()
    }

    /// Characteristic polynomial `det(xI - A)` via reduction to upper
    /// Hessenberg form.
    pub fn charpoly(&self) -> Result<Poly> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("characteristic polynomial of a non-square matrix".into()));
        }
        let f = &self.field;
        let n = self.rows;
        let mut h = self.clone();
        for j in 0..n.saturating_sub(2) {
            let Some(i) = (j + 1..n).find(|&i| h.get(i, j) != 0) else {
                continue;
            };
            if i != j + 1 {
                h.swap_rows(i, j + 1);
                for r in 0..n {
                    h.data.swap(r * n + i, r * n + j + 1);
                }
            }
            let inv = f.inv(h.get(j + 1, j));
            for r in j + 2..n {
                let t = f.mul(h.get(r, j), inv);
                if t == 0 {
                    continue;
                }
                // row_r -= t row_{j+1}; then col_{j+1} += t col_r
                h.axpy_row(r, j + 1, t, 0);
                for s in 0..n {
                    let v = f.add(h.get(s, j + 1), f.mul(t, h.get(s, r)));
                    h.set(s, j + 1, v);
                }
            }
        }
        // p[m] = (x - h_mm) p[m-1] - sum_i h_{i,m} (prod_{j=i+1}^{m} h_{j,j-1}) p[i-1]
        let x = Poly::x(f);
        let mut p: Vec<Poly> = vec![Poly::one(f)];
        for m in 1..=n {
            let mut next = x.sub(&Poly::constant(f, h.get(m - 1, m - 1))).mul(&p[m - 1]);
            let mut t = 1u32;
            for i in (1..m).rev() {
                t = f.mul(t, h.get(i, i - 1));
                if t == 0 {
                    break;
                }
                let c = f.mul(h.get(i - 1, m - 1), t);
                if c != 0 {
                    next = next.sub(&p[i - 1].scale(c));
                }
            }
            p.push(next);
        }
        Ok(p.pop().unwrap())
    }

    /// Base-`q` row-major code, for hashing and for ordering enumerations.
    pub fn code(&self) -> Option<u128> {
        let q = self.field.q() as u128;
        let mut acc: u128 = 0;
        for &c in &self.data {
            acc = acc.checked_mul(q)?.checked_add(c as u128)?;
        }
        Some(acc)
    }

    /// Solves `a B = v` for the coefficient row `a`, when `v` is in the row space of `self`.
    pub fn solve_left(&self, v: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(v.len(), self.cols);
        let f = &self.field;
        // [B^T | v^T] row reduced
        let mut aug = Matrix::zeros(f, self.cols, self.rows + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(j, i, self.get(i, j));
            }
        }
        for (j, &x) in v.iter().enumerate() {
            aug.set(j, self.rows, x);
        }
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&self.rows) {
            return None;
        }
        let mut a = vec![0u32; self.rows];
        for (i, &pc) in pivots.iter().enumerate() {
            a[pc] = aug.get(i, self.rows);
        }
        Some(a)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[{}; {}x{}](", self.field, self.rows, self.cols)?;
        for (i, r) in self.row_vectors().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{r:?}")?;
        }
        write!(f, ")")
    }
}
