//! Spinning vectors under a generator set, and irreducibility of the module
//! the generators define on `F_q^d` (row vectors, right action).
//!
//! The exhaustive test spins one vector from every one-dimensional subspace:
//! minimal submodules are cyclic, so the module is reducible iff some such
//! spin is proper. Norton's test is the fast path for larger modules.

use rand::Rng;

use crate::error::{Error, Result};
use crate::factor;
use crate::field::Field;
use crate::matrix::Matrix;
use crate::subspace::{projective_point_count, projective_points, Subspace};

/// Default cap on projective points for the exhaustive test.
pub const DEFAULT_ORACLE_CAP: u64 = 100_000;

/// Above this many projective points the dispatcher prefers Norton's test.
pub const NORTON_THRESHOLD: u64 = 1_000;

/// Random words tried by Norton's test before giving up.
pub const NORTON_WORD_BUDGET: usize = 32;

/// A subspace closed under the generators it was spun from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Submodule {
    space: Subspace,
    fingerprint: u64,
}

impl Submodule {
    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn into_space(self) -> Subspace {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Hash of the generators, for auditing which action the closure refers to.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn is_proper(&self) -> bool {
        !self.space.is_full()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible,
    /// Carries a proper nonzero invariant subspace.
    Reducible(Submodule),
}

impl Irreducibility {
    pub fn is_irreducible(&self) -> bool {
        matches!(self, Irreducibility::Irreducible)
    }

    pub fn witness(&self) -> Option<&Submodule> {
        match self {
            Irreducibility::Irreducible => None,
            Irreducibility::Reducible(w) => Some(w),
        }
    }
}

/// FNV-1a over dimensions and entries.
pub fn fingerprint(gens: &[Matrix]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    let mut eat = |x: u64| {
        for b in x.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    };
    for g in gens {
        eat(g.rows() as u64);
        for &x in g.data() {
            eat(x as u64);
        }
    }
    h
}

fn validate(gens: &[Matrix]) -> Result<(Field, usize)> {
    let first = gens.first().ok_or_else(|| Error::OutOfRange("at least one generator is required".into()))?;
    let (field, d) = (first.field().clone(), first.rows());
    for g in gens {
        if g.field() != &field {
            return Err(Error::FieldMismatch);
        }
        if g.rows() != d || g.cols() != d {
            return Err(Error::DimensionMismatch("generators must be square of one size".into()));
        }
    }
    Ok((field, d))
}

/// Semi-echelon basis under construction: row `i` is normalized at its
/// pivot and vanishes at the pivots of the rows before it.
struct Echelon<'a> {
    field: &'a Field,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl<'a> Echelon<'a> {
    fn new(field: &'a Field) -> Self {
        Echelon { field, rows: Vec::new(), pivots: Vec::new() }
    }

    /// Inserts `v` if independent; returns whether it was.
    fn insert(&mut self, mut v: Vec<u32>) -> bool {
        let f = self.field;
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let t = v[pc];
            if t != 0 {
                for (x, &r) in v.iter_mut().zip(row) {
                    if r != 0 {
                        *x = f.sub(*x, f.mul(t, r));
                    }
                }
            }
        }
        let Some(pc) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(v[pc]);
        for x in v.iter_mut() {
            *x = f.mul(*x, inv);
        }
        self.rows.push(v);
        self.pivots.push(pc);
        true
    }
}

fn spin_space(field: &Field, d: usize, seeds: &[&[u32]], gens: &[Matrix]) -> Subspace {
    let mut ech = Echelon::new(field);
    for s in seeds {
        ech.insert(s.to_vec());
    }
    let mut next = 0;
    while next < ech.rows.len() && ech.rows.len() < d {
        let v = ech.rows[next].clone();
        next += 1;
        for g in gens {
            ech.insert(g.vec_mul(&v));
            if ech.rows.len() == d {
                break;
            }
        }
    }
    if ech.rows.len() == d {
        return Subspace::full(field, d);
    }
    let m = Matrix::from_raw(field, ech.rows.len(), d, ech.rows.concat());
    Subspace::row_space(&m)
}

/// Smallest subspace containing `seeds` and closed under every generator.
pub fn spin(seeds: &[Vec<u32>], gens: &[Matrix]) -> Result<Submodule> {
    let (field, d) = validate(gens)?;
    if seeds.iter().any(|s| s.len() != d) {
        return Err(Error::DimensionMismatch(format!("seed vectors must have length {d}")));
    }
    for s in seeds {
        for &x in s {
            field.check(x as u64)?;
        }
    }
    let refs: Vec<&[u32]> = seeds.iter().map(Vec::as_slice).collect();
    Ok(Submodule { space: spin_space(&field, d, &refs, gens), fingerprint: fingerprint(gens) })
}

/// Spin of a subspace (all of its basis vectors as seeds).
pub fn spin_subspace(seed: &Subspace, gens: &[Matrix]) -> Result<Submodule> {
    let seeds: Vec<Vec<u32>> = seed.basis().row_vectors().map(<[u32]>::to_vec).collect();
    spin(&seeds, gens)
}

/// The oracle of record: spin one representative of every one-dimensional
/// subspace. The witness is the spin of the first point, in code order, that
/// stays proper.
pub fn is_irreducible_exhaustive(gens: &[Matrix], cap: u64) -> Result<Irreducibility> {
    let (field, d) = validate(gens)?;
    let points = projective_point_count(field.q() as u64, d);
    if points > cap {
        return Err(Error::CapExceeded { what: "projective space".into(), size: points.to_string(), cap });
    }
    for v in projective_points(&field, d) {
        let s = spin_space(&field, d, &[&v], gens);
        if !s.is_full() {
            return Ok(Irreducibility::Reducible(Submodule { space: s, fingerprint: fingerprint(gens) }));
        }
    }
    Ok(Irreducibility::Irreducible)
}

fn random_word(field: &Field, gens: &[Matrix], rng: &mut impl Rng) -> Matrix {
    let d = gens[0].rows();
    let mut acc = Matrix::zeros(field, d, d);
    for _ in 0..rng.random_range(1..=4) {
        let mut prod = gens[rng.random_range(0..gens.len())].clone();
        for _ in 1..rng.random_range(1..=3) {
            prod = prod.mul(&gens[rng.random_range(0..gens.len())]);
        }
        let c = rng.random_range(1..field.q());
        acc = acc.add(&prod.scale(c));
    }
    acc
}

/// Norton's irreducibility test. Looks for an algebra element `A` and an
/// irreducible factor `f` of its characteristic polynomial with
/// `nullity f(A) = deg f`, then spins a kernel vector of `f(A)` and one of
/// `f(A^T)` under the transposed generators. A kernel vector of every
/// factor is spun along the way, since any proper spin settles the question.
pub fn is_irreducible_norton(gens: &[Matrix], rng: &mut impl Rng) -> Result<Irreducibility> {
    let (field, d) = validate(gens)?;
    let transposed: Vec<Matrix> = gens.iter().map(Matrix::transpose).collect();
    for attempt in 0..NORTON_WORD_BUDGET {
        let a = match gens.get(attempt) {
            Some(g) => g.clone(),
            None => random_word(&field, gens, rng),
        };
        let mut factors = factor::factor(&a.charpoly()?, rng.random())?;
        factors.sort_by_key(|(f, _)| f.degree());
        for (f, _) in factors {
            let deg = f.degree().unwrap_or(0);
            let fa = f.eval_at_matrix(&a)?;
            let v = fa.left_kernel().row(0).to_vec();
            let s = spin_space(&field, d, &[&v], gens);
            if !s.is_full() {
                return Ok(Irreducibility::Reducible(Submodule { space: s, fingerprint: fingerprint(gens) }));
            }
            if d - fa.rank() != deg {
                continue;
            }
            let w = fa.kernel().row(0).to_vec();
            let dual = spin_space(&field, d, &[&w], &transposed);
            if !dual.is_full() {
                let space = dual.annihilator();
                return Ok(Irreducibility::Reducible(Submodule { space, fingerprint: fingerprint(gens) }));
            }
            return Ok(Irreducibility::Irreducible);
        }
    }
    Err(Error::NortonBudget(NORTON_WORD_BUDGET))
}

/// Exhaustive test up to [`NORTON_THRESHOLD`] projective points, Norton's
/// test above it, falling back to the exhaustive test if Norton's word
/// budget runs out.
pub fn is_irreducible(gens: &[Matrix], rng: &mut impl Rng) -> Result<Irreducibility> {
    let (field, d) = validate(gens)?;
    if projective_point_count(field.q() as u64, d) <= NORTON_THRESHOLD {
        return is_irreducible_exhaustive(gens, DEFAULT_ORACLE_CAP);
    }
    match is_irreducible_norton(gens, rng) {
        Err(Error::NortonBudget(_)) => is_irreducible_exhaustive(gens, DEFAULT_ORACLE_CAP),
        other => other,
    }
}
