//! Subspaces of `F_q^d` in canonical form: the RREF of a basis, so subspace
//! equality is basis equality.

use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Hash for Subspace {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.basis.rows().hash(state);
        self.basis.data().hash(state);
    }
}

impl Subspace {
    pub fn zero(field: &Field, d: usize) -> Subspace {
        Subspace { basis: Matrix::zeros(field, 0, d), pivots: Vec::new() }
    }

    pub fn full(field: &Field, d: usize) -> Subspace {
        Subspace { basis: Matrix::identity(field, d), pivots: (0..d).collect() }
    }

    /// Row space of `m`.
    pub fn row_space(m: &Matrix) -> Subspace {
        let (mut r, pivots) = m.rref();
        let w = pivots.len();
        let d = m.cols();
        let data = r.data()[..w * d].to_vec();
        r = Matrix::from_raw(m.field(), w, d, data);
        Subspace { basis: r, pivots }
    }

    pub fn span(field: &Field, d: usize, vectors: &[Vec<u32>]) -> Result<Subspace> {
        if vectors.iter().any(|v| v.len() != d) {
            return Err(Error::DimensionMismatch(format!("vectors must have length {d}")));
        }
        let m = Matrix::from_vec(field, vectors.len(), d, vectors.concat())?;
        Ok(Subspace::row_space(&m))
    }

    pub fn field(&self) -> &Field {
        self.basis.field()
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    /// RREF basis, one vector per row.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim()
    }

    pub fn is_proper_nontrivial(&self) -> bool {
        !self.is_zero() && !self.is_full()
    }

    /// `v` minus its projection along the pivot columns; zero iff `v` lies in the subspace.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let f = self.field();
        let mut v = v.to_vec();
        for (i, &c) in self.pivots.iter().enumerate() {
            let t = v[c];
            if t != 0 {
                for (x, &b) in v.iter_mut().zip(self.basis.row(i)) {
                    *x = f.sub(*x, f.mul(t, b));
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.row_vectors().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let d = self.ambient_dim();
        let mut data = self.basis.data().to_vec();
        data.extend_from_slice(other.basis.data());
        let m = Matrix::from_raw(self.field(), self.dim() + other.dim(), d, data);
        Subspace::row_space(&m)
    }

    pub fn intersection_dim(&self, other: &Subspace) -> usize {
        self.dim() + other.dim() - self.sum(other).dim()
    }

    pub fn meets_trivially(&self, other: &Subspace) -> bool {
        self.intersection_dim(other) == 0
    }

    pub fn image(&self, g: &Matrix) -> Subspace {
        Subspace::row_space(&self.basis.mul(g))
    }

    /// `W g ⊆ W`.
    pub fn is_invariant(&self, g: &Matrix) -> bool {
        self.basis.row_vectors().all(|v| self.contains(&g.vec_mul(v)))
    }

    /// `{v : v · s = 0 for all s in W}`.
    pub fn annihilator(&self) -> Subspace {
        Subspace::row_space(&self.basis.kernel())
    }

    /// Every vector of the subspace, ordered by the integer code of its
    /// coordinate vector (first coordinate most significant).
    pub fn vectors(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        let q = self.field().q() as u64;
        let w = self.dim();
        (0..q.pow(w as u32)).map(move |code| {
            let coords = digits_msb_first(code, q, w);
            self.basis.vec_mul(&coords)
        })
    }

    /// Nonzero vectors with leading coefficient 1 in coordinates, one per
    /// one-dimensional subspace, in coordinate-code order.
    pub fn projective_vectors(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        let q = self.field().q() as u64;
        let w = self.dim();
        (0..q.pow(w as u32))
            .map(move |code| digits_msb_first(code, q, w))
            .filter(|c| c.iter().find(|&&x| x != 0) == Some(&1))
            .map(move |c| self.basis.vec_mul(&c))
    }

    /// Every `w`-dimensional subspace of `F_q^d`, generated directly as RREF
    /// matrices (pivot sets in lexicographic order).
    pub fn enumerate(field: &Field, d: usize, w: usize) -> Result<Vec<Subspace>> {
        if w > d {
            return Err(Error::OutOfRange(format!("subspace dimension {w} exceeds {d}")));
        }
        let q = field.q() as u64;
        let mut out = Vec::new();
        for pivots in combinations(d, w) {
            let free: Vec<(usize, usize)> = pivots
                .iter()
                .enumerate()
                .flat_map(|(i, &pc)| (pc + 1..d).filter(|c| !pivots.contains(c)).map(move |c| (i, c)))
                .collect();
            for code in 0..q.pow(free.len() as u32) {
                let mut m = Matrix::zeros(field, w, d);
                for (i, &pc) in pivots.iter().enumerate() {
                    m.set(i, pc, 1);
                }
                for (&(i, c), x) in free.iter().zip(digits_msb_first(code, q, free.len())) {
                    m.set(i, c, x);
                }
                out.push(Subspace { basis: m, pivots: pivots.clone() });
            }
        }
        Ok(out)
    }
}

/// All vectors of `F_q^d` with first nonzero entry 1, in code order.
pub fn projective_points(field: &Field, d: usize) -> impl Iterator<Item = Vec<u32>> {
    let q = field.q() as u64;
    (0..q.pow(d as u32))
        .map(move |code| digits_msb_first(code, q, d))
        .filter(|c| c.iter().find(|&&x| x != 0) == Some(&1))
}

/// `(q^d - 1) / (q - 1)`, saturating.
pub fn projective_point_count(q: u64, d: usize) -> u64 {
    (0..d as u32).fold(0u64, |acc, i| acc.saturating_add(q.saturating_pow(i)))
}

pub(crate) fn digits_msb_first(mut code: u64, q: u64, len: usize) -> Vec<u32> {
    let mut out = vec![0u32; len];
    for slot in out.iter_mut().rev() {
        *slot = (code % q) as u32;
        code /= q;
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn enumeration_matches_brute_force_span_dedup() {
        for q in [2u64, 3] {
            let f = Field::of_order(q).unwrap();
            for d in 1..=3 {
                let all: Vec<Vec<u32>> = (0..q.pow(d as u32)).map(|c| digits_msb_first(c, q, d)).collect();
                for w in 0..=d.min(2) {
                    let mut seen = HashSet::new();
                    let mut stack = vec![Vec::<Vec<u32>>::new()];
                    while let Some(vs) = stack.pop() {
                        if vs.len() == w {
                            let s = Subspace::span(&f, d, &vs).unwrap();
                            if s.dim() == w {
                                seen.insert(s);
                            }
                            continue;
                        }
                        for v in &all {
                            let mut next = vs.clone();
                            next.push(v.clone());
                            stack.push(next);
                        }
                    }
                    let gen: HashSet<Subspace> = Subspace::enumerate(&f, d, w).unwrap().into_iter().collect();
                    assert_eq!(gen, seen, "q={q} d={d} w={w}");
                }
            }
        }
    }

    #[test]
    fn annihilator_and_membership() {
        let f = Field::new(3, 1).unwrap();
        let w = Subspace::span(&f, 3, &[vec![1, 2, 0]]).unwrap();
        let ann = w.annihilator();
        assert_eq!(ann.dim(), 2);
        for v in ann.vectors() {
            let dot = (0..3).fold(0, |acc, i| f.add(acc, f.mul(v[i], w.basis().get(0, i))));
            assert_eq!(dot, 0);
        }
        assert!(w.contains(&[2, 1, 0]));
        assert!(!w.contains(&[1, 0, 0]));
        assert_eq!(w.vectors().count(), 3);
        assert_eq!(w.projective_vectors().count(), 1);
    }

    #[test]
    fn projective_counts() {
        let f = Field::new(2, 1).unwrap();
        assert_eq!(projective_points(&f, 3).count(), 7);
        assert_eq!(projective_point_count(3, 5), 121);
    }
}
