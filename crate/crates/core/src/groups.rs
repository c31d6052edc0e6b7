//! Groups `G` with `SL(d,q) <= G <= GL(d,q)`.
//!
//! Such a group is determined by its determinant image, a subgroup of the
//! cyclic group `F_q*`; we record it by its index `m`. `m = 1` is `GL`,
//! `m = q - 1` is `SL`.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::subspace::Subspace;

/// Default cap on enumerated group elements.
pub const DEFAULT_ENUMERATION_CAP: u64 = 100_000;

/// Seeded stream `stream` of the run seeded by `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupDescriptor {
    field: Field,
    d: usize,
    index: u32,
}

impl GroupDescriptor {
    pub fn new(field: &Field, d: usize, index: u32) -> Result<GroupDescriptor> {
        let q1 = field.q() - 1;
        if d < 2 {
            return Err(Error::InvalidGroup(format!("dimension must be at least 2, got {d}")));
        }
        if index == 0 || q1 % index != 0 {
            return Err(Error::InvalidGroup(format!("determinant index {index} does not divide q - 1 = {q1}")));
        }
        Ok(GroupDescriptor { field: field.clone(), d, index })
    }

    pub fn gl(field: &Field, d: usize) -> Result<GroupDescriptor> {
        GroupDescriptor::new(field, d, 1)
    }

    pub fn sl(field: &Field, d: usize) -> Result<GroupDescriptor> {
        GroupDescriptor::new(field, d, field.q() - 1)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    /// Index of the determinant image in `F_q*`.
    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn name(&self) -> String {
        let (d, q) = (self.d, self.field.q());
        if self.index == 1 {
            format!("GL({d},{q})")
        } else if self.index == q - 1 {
            format!("SL({d},{q})")
        } else {
            format!("GL({d},{q})[det index {}]", self.index)
        }
    }

    /// `|GL(d,q)| = prod_{i<d} (q^d - q^i)`.
    pub fn gl_order(&self) -> BigUint {
        let q = BigUint::from(self.field.q());
        let qd = q.pow(self.d as u32);
        (0..self.d as u32).fold(BigUint::one(), |acc, i| acc * (&qd - q.pow(i)))
    }

    pub fn order(&self) -> BigUint {
        self.gl_order() / BigUint::from(self.index)
    }

    pub fn contains(&self, g: &Matrix) -> bool {
        if g.field() != &self.field || g.rows() != self.d || g.cols() != self.d {
            return false;
        }
        let det = g.det().unwrap();
        det != 0 && self.det_ok(det)
    }

    fn det_ok(&self, det: u32) -> bool {
        self.index == 1 || self.field.pow(det, ((self.field.q() - 1) / self.index) as u64) == 1
    }

    fn check_cap(&self, what: &str, cap: u64) -> Result<()> {
        let order = self.order();
        if order > BigUint::from(cap) {
            return Err(Error::CapExceeded { what: what.to_string(), size: order.to_string(), cap });
        }
        Ok(())
    }

    /// Every element, each once, in increasing row-major code order.
    pub fn enumerate(&self, cap: u64) -> Result<Elements> {
        self.check_cap(&self.name(), cap)?;
        let q = self.field.q() as u64;
        let n = self.d * self.d;
        let total = q
            .checked_pow(n as u32)
            .ok_or_else(|| Error::CapExceeded { what: "matrix space".into(), size: format!("{q}^{n}"), cap: u64::MAX })?;
        Ok(Elements { group: self.clone(), next: 0, total })
    }

    /// Elements `g` with `W g = W`.
    pub fn stabilizer_elements<'a>(&self, w: &'a Subspace, cap: u64) -> Result<impl Iterator<Item = Matrix> + 'a> {
        if w.field() != &self.field || w.ambient_dim() != self.d {
            return Err(Error::DimensionMismatch("subspace does not live in the natural module".into()));
        }
        Ok(self.enumerate(cap)?.filter(move |g| w.is_invariant(g)))
    }

    /// Exactly uniform element of `G`.
    pub fn sample(&self, rng: &mut impl Rng) -> Matrix {
        let f = &self.field;
        let mut g = sample_gl(f, self.d, rng);
        if self.index == 1 {
            return g;
        }
        // D(det g)^-1 g is uniform in SL; then multiply by D(lambda)
        let det = g.det().unwrap();
        let sub_order = (f.q() - 1) / self.index;
        let lambda = f.pow(f.primitive_element(), self.index as u64 * rng.random_range(0..sub_order) as u64);
        let c = f.mul(f.inv(det), lambda);
        for j in 0..self.d {
            let v = f.mul(g.get(0, j), c);
            g.set(0, j, v);
        }
        g
    }

    /// Uniform element of the stabilizer `G_W`: conjugate a uniform block
    /// lower-triangular matrix by a basis change adapted to `W`, rejecting on
    /// the determinant condition.
    pub fn sample_stabilizer(&self, w: &Subspace, rng: &mut impl Rng) -> Matrix {
        let f = &self.field;
        let d = self.d;
        let k = w.dim();
        let p = adapted_basis(w);
        let p_inv = p.inverse().expect("adapted basis is invertible");
        loop {
            let a = sample_gl_or_empty(f, k, rng);
            let dblock = sample_gl_or_empty(f, d - k, rng);
            let mut b = Matrix::zeros(f, d, d);
            for i in 0..k {
                for j in 0..k {
                    b.set(i, j, a.get(i, j));
                }
            }
            for i in k..d {
                for j in 0..k {
                    b.set(i, j, rng.random_range(0..f.q()));
                }
                for j in k..d {
                    b.set(i, j, dblock.get(i - k, j - k));
                }
            }
            let g = p_inv.mul(&b).mul(&p);
            if self.det_ok(g.det().unwrap()) {
                return g;
            }
        }
    }

    /// Number of elements as a `u64`, if it fits.
    pub fn order_u64(&self) -> Option<u64> {
        self.order().to_u64()
    }
}

/// Invertible matrix whose first `dim W` rows are the basis of `W`.
pub fn adapted_basis(w: &Subspace) -> Matrix {
    let f = w.field();
    let d = w.ambient_dim();
    let mut rows: Vec<Vec<u32>> = w.basis().row_vectors().map(<[u32]>::to_vec).collect();
    for j in 0..d {
        if !w.pivots().contains(&j) {
            let mut e = vec![0u32; d];
            e[j] = 1;
            rows.push(e);
        }
    }
    Matrix::from_rows(f, &rows).unwrap()
}

/// Uniform subspace of dimension `w`.
pub fn random_subspace(field: &Field, d: usize, w: usize, rng: &mut impl Rng) -> Subspace {
    loop {
        let data = (0..w * d).map(|_| rng.random_range(0..field.q())).collect();
        let s = Subspace::row_space(&Matrix::from_raw(field, w, d, data));
        if s.dim() == w {
            return s;
        }
    }
}

/// Uniform element of `GL(n, q)` by rejection.
pub fn sample_gl(field: &Field, n: usize, rng: &mut impl Rng) -> Matrix {
    loop {
        let data = (0..n * n).map(|_| rng.random_range(0..field.q())).collect();
        let m = Matrix::from_raw(field, n, n, data);
        if m.det().unwrap() != 0 {
            return m;
        }
    }
}

fn sample_gl_or_empty(field: &Field, n: usize, rng: &mut impl Rng) -> Matrix {
    if n == 0 {
        Matrix::zeros(field, 0, 0)
    } else {
        sample_gl(field, n, rng)
    }
}

/// Lazy enumeration of a group's elements.
pub struct Elements {
    group: GroupDescriptor,
    next: u64,
    total: u64,
}

impl Iterator for Elements {
    type Item = Matrix;

    fn next(&mut self) -> Option<Matrix> {
        let f = &self.group.field;
        let q = f.q() as u64;
        let n = self.group.d * self.group.d;
        while self.next < self.total {
            let code = self.next;
            self.next += 1;
            let data = crate::subspace::digits_msb_first(code, q, n);
            let m = Matrix::from_raw(f, self.group.d, self.group.d, data);
            let det = m.det().unwrap();
            if det != 0 && self.group.det_ok(det) {
                return Some(m);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn f(q: u64) -> Field {
        Field::of_order(q).unwrap()
    }

    #[test]
    fn orders() {
        assert_eq!(GroupDescriptor::gl(&f(2), 2).unwrap().order(), BigUint::from(6u32));
        assert_eq!(GroupDescriptor::gl(&f(2), 3).unwrap().order(), BigUint::from(168u32));
        assert_eq!(GroupDescriptor::sl(&f(3), 2).unwrap().order(), BigUint::from(24u32));
    }

    #[test]
    fn descriptor_validation() {
        assert!(GroupDescriptor::new(&f(5), 3, 3).is_err());
        assert!(GroupDescriptor::new(&f(5), 3, 2).is_ok());
        assert!(GroupDescriptor::new(&f(5), 1, 1).is_err());
        // q = 2: SL = GL
        assert_eq!(GroupDescriptor::sl(&f(2), 3).unwrap(), GroupDescriptor::gl(&f(2), 3).unwrap());
    }

    #[test]
    fn enumeration_counts() {
        let gl22 = GroupDescriptor::gl(&f(2), 2).unwrap();
        assert_eq!(gl22.enumerate(100).unwrap().count(), 6);
        let sl22: Vec<Matrix> = GroupDescriptor::sl(&f(2), 2).unwrap().enumerate(100).unwrap().collect();
        assert_eq!(sl22, gl22.enumerate(100).unwrap().collect::<Vec<_>>());
        let gl33 = GroupDescriptor::gl(&f(3), 3).unwrap();
        assert_eq!(gl33.enumerate(DEFAULT_ENUMERATION_CAP).unwrap().count(), 11232);
        for (q, d, m) in [(3u64, 2usize, 2u32), (5, 2, 2), (5, 2, 4), (4, 2, 3)] {
            let g = GroupDescriptor::new(&f(q), d, m).unwrap();
            let n = g.enumerate(DEFAULT_ENUMERATION_CAP).unwrap().count();
            assert_eq!(BigUint::from(n), g.order(), "{}", g.name());
        }
    }

    #[test]
    fn enumeration_is_code_ordered() {
        let g = GroupDescriptor::gl(&f(3), 2).unwrap();
        let codes: Vec<u128> = g.enumerate(1000).unwrap().map(|m| m.code().unwrap()).collect();
        assert!(codes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn cap_enforced() {
        let g = GroupDescriptor::gl(&f(3), 3).unwrap();
        assert!(matches!(g.enumerate(1000), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn stabilizer_counts() {
        let field = f(2);
        let g = GroupDescriptor::gl(&field, 3).unwrap();
        let e1 = Subspace::span(&field, 3, &[vec![1, 0, 0]]).unwrap();
        assert_eq!(g.stabilizer_elements(&e1, 1000).unwrap().count(), 24);
        assert_eq!(g.stabilizer_elements(&Subspace::zero(&field, 3), 1000).unwrap().count(), 168);
        assert_eq!(g.stabilizer_elements(&Subspace::full(&field, 3), 1000).unwrap().count(), 168);
    }

    #[test]
    fn index_of_stabilizer_is_gaussian_count() {
        // |G : G_W| = number of w-dimensional subspaces, by transitivity
        for q in [2u64, 3] {
            let field = f(q);
            for d in 2..=3 {
                let g = GroupDescriptor::gl(&field, d).unwrap();
                let order = g.order_u64().unwrap();
                for w in 0..=d {
                    let rep = &Subspace::enumerate(&field, d, w).unwrap()[0];
                    let stab = g.stabilizer_elements(rep, DEFAULT_ENUMERATION_CAP).unwrap().count() as u64;
                    let subspaces = Subspace::enumerate(&field, d, w).unwrap().len() as u64;
                    assert_eq!(order / stab, subspaces, "q={q} d={d} w={w}");
                    assert_eq!(order % stab, 0);
                }
            }
        }
    }

    #[test]
    fn sampling_stays_in_group() {
        let mut rng = stream_rng(3, 0);
        let sl23 = GroupDescriptor::sl(&f(3), 2).unwrap();
        for _ in 0..10_000 {
            assert_eq!(sl23.sample(&mut rng).det().unwrap(), 1);
        }
        let g = GroupDescriptor::new(&f(7), 2, 3).unwrap();
        for _ in 0..1000 {
            assert!(g.contains(&g.sample(&mut rng)));
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let g = GroupDescriptor::gl(&f(5), 3).unwrap();
        let a: Vec<Matrix> = (0..5).scan(stream_rng(9, 2), |r, _| Some(g.sample(r))).collect();
        let b: Vec<Matrix> = (0..5).scan(stream_rng(9, 2), |r, _| Some(g.sample(r))).collect();
        let c: Vec<Matrix> = (0..5).scan(stream_rng(9, 3), |r, _| Some(g.sample(r))).collect();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn stabilizer_sampling_is_uniform_on_small_case() {
        let field = f(2);
        let g = GroupDescriptor::gl(&field, 3).unwrap();
        let w = Subspace::span(&field, 3, &[vec![1, 1, 0]]).unwrap();
        let mut rng = stream_rng(1, 0);
        let mut counts: HashMap<u128, u32> = HashMap::new();
        for _ in 0..24_000 {
            let s = g.sample_stabilizer(&w, &mut rng);
            assert!(w.is_invariant(&s));
            *counts.entry(s.code().unwrap()).or_default() += 1;
        }
        assert_eq!(counts.len(), 24);
        assert!(counts.values().all(|&c| (700..1300).contains(&c)));
    }
}
