//! Fat and ppd elements of `GL(d,q)`.
//!
//! `g` is fat with degree `e` when its characteristic polynomial has an
//! irreducible factor of degree `e > d/2`. Such a factor is unique and
//! occurs once, so it is exactly the degree-`e` DDF component.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::arith::{divisors_u64, prime_divisors_big};
use crate::error::{Error, Result};
use crate::factor::degree_profile;
use crate::matrix::Matrix;
use crate::poly::Poly;

/// Largest `q^e - 1`, in bits, that `primitive_prime_divisors` will factor.
pub const PPD_BIT_BUDGET: u64 = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FatVerdict {
    pub is_fat: bool,
    /// Fat degree, when fat.
    pub e: Option<usize>,
    /// Irreducible factors of the characteristic polynomial as sorted `(degree, multiplicity)`.
    pub profile: Vec<(usize, u32)>,
    /// The degree-`e` irreducible factor, when fat.
    pub factor: Option<Poly>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PpdVerdict {
    pub is_ppd: bool,
    pub e: usize,
    /// Primitive prime divisors of `q^e - 1` dividing the element order.
    pub witness_primes: Vec<BigUint>,
}

/// Fatness of the characteristic polynomial `chi` of a `d x d` matrix.
pub fn fat_verdict_of_charpoly(chi: &Poly) -> Result<FatVerdict> {
    let d = chi.degree().ok_or(Error::ZeroPolynomial)?;
    if chi.coeff(0) == 0 {
        return Err(Error::Singular);
    }
    let profile = degree_profile(chi)?;
    let mut big = profile.components.iter().filter(|c| 2 * c.degree > d);
    let hit = big.next();
    assert!(big.next().is_none(), "two fat degrees for one element");
    let (e, factor) = match hit {
        Some(c) => {
            assert!(c.multiplicity == 1 && c.factor_count() == 1);
            (Some(c.degree), Some(c.product.clone()))
        }
        None => (None, None),
    };
    Ok(FatVerdict { is_fat: e.is_some(), e, profile: profile.multiset(), factor })
}

pub fn fat_test(g: &Matrix) -> Result<FatVerdict> {
    if g.rows() != g.cols() {
        return Err(Error::DimensionMismatch("fat_test needs a square matrix".into()));
    }
    fat_verdict_of_charpoly(&g.charpoly()?)
}

type PpdCache = RwLock<HashMap<(u64, u32), Arc<Vec<BigUint>>>>;

fn ppd_cache() -> &'static PpdCache {
    static CACHE: OnceLock<PpdCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Primes `r` dividing `q^e - 1` with `ord_r(q) = e`, ascending.
pub fn primitive_prime_divisors(q: u64, e: u32) -> Result<Vec<BigUint>> {
    if q < 2 || e == 0 {
        return Err(Error::OutOfRange(format!("need q >= 2 and e >= 1, got q={q}, e={e}")));
    }
    if let Some(hit) = ppd_cache().read().unwrap().get(&(q, e)) {
        return Ok(hit.as_ref().clone());
    }
    let qb = BigUint::from(q);
    let n = qb.pow(e) - 1u32;
    if n.bits() > PPD_BIT_BUDGET {
        return Err(Error::FactorBudget(format!("{q}^{e} - 1 exceeds {PPD_BIT_BUDGET} bits")));
    }
    let proper: Vec<u32> = divisors_u64(e as u64).into_iter().filter(|&j| j < e as u64).map(|j| j as u32).collect();
    let out: Vec<BigUint> = prime_divisors_big(&n)?
        .into_iter()
        .filter(|r| proper.iter().all(|&j| !(qb.pow(j) - 1u32).is_multiple_of(r)))
        .collect();
    ppd_cache().write().unwrap().insert((q, e), Arc::new(out.clone()));
    Ok(out)
}

/// Whether `g` is a ppd element for degree `e`, with `d/2 < e <= d`. The
/// order test runs on `x` modulo the degree-`e` factor, whose order divides
/// `q^e - 1`; the other factors have degree below `e` and contribute no
/// primitive divisor.
pub fn ppd_test(g: &Matrix, e: usize) -> Result<PpdVerdict> {
    let d = g.rows();
    if 2 * e <= d || e > d {
        return Err(Error::OutOfRange(format!("ppd degree {e} must satisfy {d}/2 < e <= {d}")));
    }
    let verdict = fat_test(g)?;
    ppd_from_fat(&verdict, e)
}

/// ppd test reusing a fat verdict for the same element.
pub fn ppd_from_fat(verdict: &FatVerdict, e: usize) -> Result<PpdVerdict> {
    let none = PpdVerdict { is_ppd: false, e, witness_primes: Vec::new() };
    let Some(h) = verdict.factor.as_ref().filter(|_| verdict.e == Some(e)) else {
        return Ok(none);
    };
    let field = h.field();
    let q = field.q() as u64;
    let primes = primitive_prime_divisors(q, e as u32)?;
    let m = BigUint::from(q).pow(e as u32) - 1u32;
    let x = Poly::x(field);
    let witness_primes: Vec<BigUint> = primes
        .into_iter()
        .filter(|r| !x.pow_mod_big(&(&m / r), h).is_one())
        .collect();
    Ok(PpdVerdict { is_ppd: !witness_primes.is_empty(), e, witness_primes })
}

/// Order of an invertible matrix by repeated multiplication, up to `limit`.
pub fn element_order(g: &Matrix, limit: u64) -> Option<u64> {
    let mut acc = g.clone();
    for k in 1..=limit {
        if acc.is_identity() {
            return Some(k);
        }
        acc = acc.mul(g);
    }
    None
}

/// `ord_r(q)` for a prime `r` not dividing `q`.
pub fn multiplicative_order(q: u64, r: &BigUint) -> Option<u64> {
    let r64 = r.to_u64()?;
    let qm = q % r64;
    if qm == 0 {
        return None;
    }
    divisors_u64(r64 - 1).into_iter().find(|&k| crate::arith::pow_mod_u64(qm, k, r64) == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::groups::{sample_gl, stream_rng, GroupDescriptor};

    fn companion(field: &Field, c: &[u32]) -> Matrix {
        Poly::new(field, c.to_vec()).unwrap().companion().unwrap()
    }

    fn big(xs: &[u64]) -> Vec<BigUint> {
        xs.iter().map(|&x| BigUint::from(x)).collect()
    }

    /// x^2 + x + 2 over F_3 is primitive; add a fixed line.
    fn order_eight(f3: &Field) -> Matrix {
        let c = companion(f3, &[2, 1, 1]);
        Matrix::block_diag(&[&c, &Matrix::identity(f3, 1)])
    }

    #[test]
    fn fat_examples() {
        let f2 = Field::new(2, 1).unwrap();
        let v = fat_test(&companion(&f2, &[1, 1, 0, 1])).unwrap();
        assert_eq!((v.is_fat, v.e), (true, Some(3)));
        let v = fat_test(&Matrix::identity(&f2, 4)).unwrap();
        assert!(!v.is_fat);
        assert_eq!(v.profile, vec![(1, 4)]);
        let f3 = Field::new(3, 1).unwrap();
        let g = order_eight(&f3);
        assert_eq!(element_order(&g, 100), Some(8));
        let v = fat_test(&g).unwrap();
        assert_eq!(v.e, Some(2));
        assert_eq!(v.profile, vec![(1, 1), (2, 1)]);
        assert!(!ppd_test(&g, 2).unwrap().is_ppd);
        assert!(matches!(fat_test(&Matrix::zeros(&f2, 2, 2)), Err(Error::Singular)));
    }

    #[test]
    fn primitive_prime_divisor_examples() {
        assert_eq!(primitive_prime_divisors(2, 4).unwrap(), big(&[5]));
        assert_eq!(primitive_prime_divisors(2, 6).unwrap(), big(&[]));
        assert_eq!(primitive_prime_divisors(3, 2).unwrap(), big(&[]));
        assert_eq!(primitive_prime_divisors(2, 1).unwrap(), big(&[]));
        assert_eq!(primitive_prime_divisors(3, 1).unwrap(), big(&[2]));
        assert_eq!(primitive_prime_divisors(2, 11).unwrap(), big(&[23, 89]));
        assert!(matches!(primitive_prime_divisors(2, 300), Err(Error::FactorBudget(_))));
    }

    #[test]
    fn ppd_set_matches_order_oracle() {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            for e in 1..=8u32 {
                let n = q.pow(e) - 1;
                let expect: Vec<u64> = crate::arith::prime_divisors_u64(n)
                    .into_iter()
                    .filter(|&r| (1..e).all(|j| (q.pow(j) - 1) % r != 0))
                    .collect();
                let got = primitive_prime_divisors(q, e).unwrap();
                assert_eq!(got, big(&expect), "q={q} e={e}");
                for r in &got {
                    assert_eq!(multiplicative_order(q, r), Some(e as u64));
                }
            }
        }
    }

    #[test]
    fn primitive_quartic_is_ppd() {
        let f2 = Field::new(2, 1).unwrap();
        let g = companion(&f2, &[1, 1, 0, 0, 1]);
        assert_eq!(element_order(&g, 100), Some(15));
        let v = ppd_test(&g, 4).unwrap();
        assert!(v.is_ppd);
        assert_eq!(v.witness_primes, big(&[5]));
        assert!(!ppd_test(&Matrix::identity(&f2, 4), 3).unwrap().is_ppd);
        assert!(ppd_test(&g, 2).is_err());
    }

    /// ppd by element order: some primitive prime divisor divides `|g|`.
    fn ppd_by_order(g: &Matrix, e: usize) -> bool {
        let q = g.field().q() as u64;
        let n = element_order(g, 1 << 20).unwrap();
        primitive_prime_divisors(q, e as u32).unwrap().iter().any(|r| n % r.to_u64().unwrap() == 0)
    }

    fn exhaustive_check(field: &Field, d: usize) -> (u64, u64) {
        let g = GroupDescriptor::gl(field, d).unwrap();
        let (mut fat, mut ppd) = (0, 0);
        for m in g.enumerate(u64::MAX).unwrap() {
            let v = fat_test(&m).unwrap();
            for e in d / 2 + 1..=d {
                let oracle = ppd_by_order(&m, e);
                assert_eq!(ppd_from_fat(&v, e).unwrap().is_ppd, oracle);
                if oracle {
                    assert_eq!(v.e, Some(e));
                }
            }
            if v.e == Some(d / 2 + 1) {
                fat += 1;
                ppd += ppd_from_fat(&v, d / 2 + 1).unwrap().is_ppd as u64;
            }
        }
        (fat, ppd)
    }

    #[test]
    fn ppd_implies_fat_in_gl_3_3() {
        let (fat, ppd) = exhaustive_check(&Field::new(3, 1).unwrap(), 3);
        assert_eq!(ppd, 0);
        assert!(fat > ppd);
    }

    #[test]
    fn ppd_implies_fat_in_gl_4_2() {
        exhaustive_check(&Field::new(2, 1).unwrap(), 4);
    }

    #[test]
    fn similarity_invariance() {
        let mut rng = stream_rng(11, 0);
        for q in [2u64, 3, 4, 5] {
            let f = Field::of_order(q).unwrap();
            for d in 2..=5 {
                for _ in 0..20 {
                    let g = sample_gl(&f, d, &mut rng);
                    let p = sample_gl(&f, d, &mut rng);
                    let h = p.inverse().unwrap().mul(&g).mul(&p);
                    assert_eq!(fat_test(&g).unwrap(), fat_test(&h).unwrap());
                }
            }
        }
    }
}
