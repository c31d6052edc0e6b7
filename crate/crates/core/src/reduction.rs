//! From a fat pair to an irreducible fat pair on a composition factor.
//!
//! `U_i` is the unique `e_i`-dimensional irreducible `<g_i>`-submodule,
//! `X` the submodule spun from `U_1 + U_2`, and `Y` a submodule of `X`
//! maximal by inclusion among those meeting both `U_i` trivially. The pair
//! induced on `X/Y` is irreducible and fat with the same degrees.

use rand::Rng;

use crate::error::{Error, Result};
use crate::fatness::fat_test;
use crate::groups::stream_rng;
use crate::matrix::Matrix;
use crate::modspin::{self, spin_subspace};
use crate::subspace::Subspace;

/// Largest number of vectors of `X` scanned exhaustively.
pub const DEFAULT_SCAN_CAP: u64 = 1_000_000;

/// Vectors of `X` drawn when `X` is too large to scan.
pub const SAMPLED_SCAN: usize = 4096;

/// `{v : v f(g) = 0}` for the degree-`e` factor `f` of the characteristic
/// polynomial of a fat element.
pub fn fat_submodule(g: &Matrix) -> Result<Subspace> {
    let v = fat_test(g)?;
    let f = v.factor.ok_or(Error::NotFat)?;
    let u = Subspace::row_space(&f.eval_at_matrix(g)?.left_kernel());
    debug_assert_eq!(Some(u.dim()), v.e);
    Ok(u)
}

/// How the maximality of `Y` was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanMode {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionChecks {
    pub u_dimensions: bool,
    pub u_invariant: bool,
    pub u_irreducible: bool,
    pub x_invariant: bool,
    pub y_invariant: bool,
    pub y_meets_u_trivially: bool,
    pub y_maximal: bool,
    pub n_exceeds_half: bool,
    pub induced_irreducible: bool,
    pub induced_fat_degrees: bool,
}

impl ReductionChecks {
    pub fn all(&self) -> bool {
        self.failures().is_empty()
    }

    /// Names of the checks that failed.
    pub fn failures(&self) -> Vec<&'static str> {
        [
            ("u_dimensions", self.u_dimensions),
            ("u_invariant", self.u_invariant),
            ("u_irreducible", self.u_irreducible),
            ("x_invariant", self.x_invariant),
            ("y_invariant", self.y_invariant),
            ("y_meets_u_trivially", self.y_meets_u_trivially),
            ("y_maximal", self.y_maximal),
            ("n_exceeds_half", self.n_exceeds_half),
            ("induced_irreducible", self.induced_irreducible),
            ("induced_fat_degrees", self.induced_fat_degrees),
        ]
        .into_iter()
        .filter(|(_, ok)| !ok)
        .map(|(name, _)| name)
        .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionCertificate {
    pub e1: usize,
    pub e2: usize,
    pub u1: Subspace,
    pub u2: Subspace,
    pub x: Subspace,
    pub y: Subspace,
    pub n: usize,
    /// Basis of `X` whose last `n` rows give the quotient coordinates.
    pub quotient_basis: Matrix,
    pub induced: (Matrix, Matrix),
    pub scan: ScanMode,
    pub checks: ReductionChecks,
}

fn validate_pair(g1: &Matrix, g2: &Matrix) -> Result<()> {
    if g1.field() != g2.field() {
        return Err(Error::FieldMismatch);
    }
    if g1.rows() != g1.cols() || g2.rows() != g2.cols() || g1.rows() != g2.rows() {
        return Err(Error::DimensionMismatch("pair must be square matrices of one size".into()));
    }
    Ok(())
}

fn extend(y: &Subspace, v: &[u32], gens: &[Matrix]) -> Result<Subspace> {
    let mut seeds: Vec<Vec<u32>> = y.basis().row_vectors().map(<[u32]>::to_vec).collect();
    seeds.push(v.to_vec());
    Ok(modspin::spin(&seeds, gens)?.into_space())
}

/// Candidate vectors of `X`: every projective point when small enough,
/// otherwise the basis of `X` and a seeded random sample.
fn scan_vectors(x: &Subspace, cap: u64, rng: &mut impl Rng) -> (Vec<Vec<u32>>, ScanMode) {
    let q = x.field().q() as u64;
    let fits = q.checked_pow(x.dim() as u32).is_some_and(|n| n <= cap);
    if fits {
        return (x.projective_vectors().collect(), ScanMode::Exhaustive);
    }
    let mut out: Vec<Vec<u32>> = x.basis().row_vectors().map(<[u32]>::to_vec).collect();
    let rows: Vec<Vec<u32>> = out.clone();
    for _ in 0..SAMPLED_SCAN {
        let mut v = vec![0u32; x.ambient_dim()];
        let f = x.field();
        for r in &rows {
            let c = rng.random_range(0..f.q());
            for (a, &b) in v.iter_mut().zip(r) {
                *a = f.add(*a, f.mul(c, b));
            }
        }
        out.push(v);
    }
    (out, ScanMode::Sampled)
}

/// Greedy `Y`: scan `X` and adjoin `v` whenever the spin of `Y + <v>` still
/// meets both `U_i` trivially.
fn greedy_y(gens: &[Matrix], u1: &Subspace, u2: &Subspace, scan: &[Vec<u32>]) -> Result<Subspace> {
    let mut y = Subspace::zero(u1.field(), u1.ambient_dim());
    for v in scan {
        if y.contains(v) {
            continue;
        }
        let cand = extend(&y, v, gens)?;
        if cand.meets_trivially(u1) && cand.meets_trivially(u2) {
            y = cand;
        }
    }
    Ok(y)
}

/// Basis of `y` extended to one of `x` by RREF basis rows of `x`, in order.
fn quotient_basis(x: &Subspace, y: &Subspace) -> Matrix {
    let mut rows: Vec<Vec<u32>> = y.basis().row_vectors().map(<[u32]>::to_vec).collect();
    let mut span = y.clone();
    for r in x.basis().row_vectors() {
        if !span.contains(r) {
            rows.push(r.to_vec());
            span = Subspace::span(x.field(), x.ambient_dim(), &rows).expect("rows have ambient length");
        }
    }
    Matrix::from_rows(x.field(), &rows).expect("nonempty basis")
}

/// Matrix of `g` acting on the quotient of the row space of `basis` by its
/// first `skip` rows.
fn induced_matrix(g: &Matrix, basis: &Matrix, skip: usize) -> Matrix {
    let n = basis.rows() - skip;
    let mut data = Vec::with_capacity(n * n);
    for i in skip..basis.rows() {
        let image = g.vec_mul(basis.row(i));
        let coords = basis.solve_left(&image).expect("image lies in the submodule");
        data.extend_from_slice(&coords[skip..]);
    }
    Matrix::from_raw(g.field(), n, n, data)
}

/// Matrix of `g` restricted to an invariant subspace, in its RREF basis.
pub fn restrict(g: &Matrix, u: &Subspace) -> Matrix {
    induced_matrix(g, u.basis(), 0)
}

pub fn reduce_pair(g1: &Matrix, g2: &Matrix) -> Result<ReductionCertificate> {
    reduce_pair_with_cap(g1, g2, DEFAULT_SCAN_CAP)
}

pub fn reduce_pair_with_cap(g1: &Matrix, g2: &Matrix, cap: u64) -> Result<ReductionCertificate> {
    validate_pair(g1, g2)?;
    let d = g1.rows();
    let u1 = fat_submodule(g1)?;
    let u2 = fat_submodule(g2)?;
    let (e1, e2) = (u1.dim(), u2.dim());
    let gens = [g1.clone(), g2.clone()];
    let x = spin_subspace(&u1.sum(&u2), &gens)?.into_space();
    let mut rng = stream_rng(0, 0);
    let (scan, mode) = scan_vectors(&x, cap, &mut rng);
    let y = greedy_y(&gens, &u1, &u2, &scan)?;
    let basis = quotient_basis(&x, &y);
    let n = x.dim() - y.dim();
    let induced = (induced_matrix(g1, &basis, y.dim()), induced_matrix(g2, &basis, y.dim()));

    let oracle = |gens: &[Matrix], rng: &mut _| -> Result<bool> { Ok(modspin::is_irreducible(gens, rng)?.is_irreducible()) };
    let mut y_maximal = true;
    for v in &scan {
        if !y.contains(v) {
            let s = extend(&y, v, &gens)?;
            if s.meets_trivially(&u1) && s.meets_trivially(&u2) {
                y_maximal = false;
                break;
            }
        }
    }
    let induced_irreducible = oracle(&[induced.0.clone(), induced.1.clone()], &mut rng)?;
    let checks = ReductionChecks {
        u_dimensions: 2 * e1 > d && 2 * e2 > d,
        u_invariant: u1.is_invariant(g1) && u2.is_invariant(g2),
        u_irreducible: oracle(&[restrict(g1, &u1)], &mut rng)? && oracle(&[restrict(g2, &u2)], &mut rng)?,
        x_invariant: x.is_invariant(g1) && x.is_invariant(g2) && x.contains_subspace(&u1) && x.contains_subspace(&u2),
        y_invariant: y.is_invariant(g1) && y.is_invariant(g2) && x.contains_subspace(&y),
        y_meets_u_trivially: y.meets_trivially(&u1) && y.meets_trivially(&u2),
        y_maximal,
        n_exceeds_half: n >= e1.max(e2) && 2 * e1.max(e2) > d,
        induced_irreducible,
        induced_fat_degrees: fat_test(&induced.0)?.e == Some(e1) && fat_test(&induced.1)?.e == Some(e2),
    };
    Ok(ReductionCertificate { e1, e2, u1, u2, x, y, n, quotient_basis: basis, induced, scan: mode, checks })
}

/// Where an invariant subspace sits relative to the fat submodules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvariantPosition {
    /// Meets both `U_i` trivially, `1 <= dim W <= d - max(e1, e2)`.
    MeetsTrivially,
    /// Contains both `U_i`, `max(e1, e2) <= dim W <= d - 1`.
    ContainsBoth,
    /// Neither description applies.
    Neither,
}

/// Classifies a nonzero proper subspace invariant under a fat pair.
pub fn classify_invariant_subspace(g1: &Matrix, g2: &Matrix, w: &Subspace) -> Result<InvariantPosition> {
    validate_pair(g1, g2)?;
    if !w.is_proper_nontrivial() {
        return Err(Error::OutOfRange("subspace must be nonzero and proper".into()));
    }
    if !(w.is_invariant(g1) && w.is_invariant(g2)) {
        return Err(Error::NotInvariant);
    }
    let d = g1.rows();
    let u1 = fat_submodule(g1)?;
    let u2 = fat_submodule(g2)?;
    let emax = u1.dim().max(u2.dim());
    let k = w.dim();
    if w.meets_trivially(&u1) && w.meets_trivially(&u2) && k + emax <= d {
        Ok(InvariantPosition::MeetsTrivially)
    } else if w.contains_subspace(&u1) && w.contains_subspace(&u2) && k >= emax {
        Ok(InvariantPosition::ContainsBoth)
    } else {
        Ok(InvariantPosition::Neither)
    }
}

/// Every nonzero proper subspace invariant under all of `gens`.
pub fn invariant_subspaces(gens: &[Matrix]) -> Result<Vec<Subspace>> {
    let field = gens[0].field();
    let d = gens[0].rows();
    let mut out = Vec::new();
    for w in 1..d {
        out.extend(Subspace::enumerate(field, d, w)?.into_iter().filter(|s| gens.iter().all(|g| s.is_invariant(g))));
    }
    Ok(out)
}
