//! Finite fields `F_q`, `q = p^k`.
//!
//! Elements are integer codes in `[0, q)`: the element with coefficient vector
//! `(c_0, ..., c_{k-1})` over `F_p` (in the power basis of a root of the
//! modulus) has code `sum c_i p^i`. Codes below `p` are the prime subfield.
//!
//! Fields with `q <= 2^16` carry log/antilog tables; larger fields fall back
//! to polynomial arithmetic on the coefficient digits.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::arith::{is_prime_u64, prime_divisors_u64};
use crate::error::{Error, Result};
use crate::poly;

/// Largest supported field order (exclusive).
pub const MAX_ORDER: u64 = 1 << 31;

const TABLE_LIMIT: u32 = 1 << 16;
const ADD_TABLE_LIMIT: u32 = 256;

struct Inner {
    p: u32,
    k: u32,
    q: u32,
    /// Monic modulus, low degree first, `k + 1` coefficients; empty for prime fields.
    modulus: Vec<u32>,
    log: Vec<u32>,
    exp: Vec<u32>,
    add: Vec<u32>,
    primitive: u32,
}

/// A finite field. Cheap to clone; all clones share the same tables.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

/// Binary/unary field operations, as accepted by [`Field::apply`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Mul,
    Neg,
    Inv,
    Pow,
}

fn cache() -> &'static Mutex<HashMap<(u64, u32), Field>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32), Field>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

impl Field {
    /// `F_{p^k}` with the lexicographically least monic irreducible modulus
    /// (coefficient tuples `(c_0, c_1, ...)` compared from `c_0` upward).
    pub fn new(p: u64, k: u32) -> Result<Field> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::InvalidDegree(k));
        }
        let q = p
            .checked_pow(k)
            .filter(|&q| q < MAX_ORDER)
            .ok_or(Error::OrderTooLarge { p, k, max: MAX_ORDER })?;
        if let Some(f) = cache().lock().unwrap().get(&(p, k)) {
            return Ok(f.clone());
        }
        let field = if k == 1 {
            Field::build(p as u32, 1, q as u32, Vec::new())
        } else {
            let base = Field::new(p, 1)?;
            let modulus = poly::least_irreducible(&base, k as usize);
            Field::build(p as u32, k, q as u32, modulus.coeffs().to_vec())
        };
        cache().lock().unwrap().insert((p, k), field.clone());
        Ok(field)
    }

    /// Field of order `q`, which must be a prime power.
    pub fn of_order(q: u64) -> Result<Field> {
        let (p, k) = crate::arith::prime_power(q)
            .ok_or_else(|| Error::OutOfRange(format!("{q} is not a prime power")))?;
        Field::new(p, k)
    }

    /// `F_p[x] / (modulus)` for an explicit monic irreducible modulus of degree `>= 2`,
    /// coefficients low degree first.
    pub fn with_modulus(p: u64, modulus: &[u32]) -> Result<Field> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        if modulus.len() < 3 {
            return Err(Error::InvalidModulus("degree must be at least 2".into()));
        }
        if modulus.iter().any(|&c| c as u64 >= p) {
            return Err(Error::InvalidModulus("coefficient out of range".into()));
        }
        if *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidModulus("modulus must be monic".into()));
        }
        let k = (modulus.len() - 1) as u32;
        let q = p
            .checked_pow(k)
            .filter(|&q| q < MAX_ORDER)
            .ok_or(Error::OrderTooLarge { p, k, max: MAX_ORDER })?;
        let base = Field::new(p, 1)?;
        let m = poly::Poly::new(&base, modulus.to_vec())?;
        if !m.is_irreducible() {
            return Err(Error::InvalidModulus("modulus is reducible".into()));
        }
        let standard = Field::new(p, k)?;
        if standard.modulus() == Some(modulus) {
            return Ok(standard);
        }
        Ok(Field::build(p as u32, k, q as u32, modulus.to_vec()))
    }

    fn build(p: u32, k: u32, q: u32, modulus: Vec<u32>) -> Field {
        let mut inner = Inner { p, k, q, modulus, log: Vec::new(), exp: Vec::new(), add: Vec::new(), primitive: 0 };
        if k > 1 && p != 2 && q <= ADD_TABLE_LIMIT {
            let mut add = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    add[(a * q + b) as usize] = digit_add(p, k, a, b);
                }
            }
            inner.add = add;
        }
        let mut field = Field(Arc::new(inner));
        let primitive = field.find_primitive();
        let (log, exp) = if q <= TABLE_LIMIT && q > 2 {
            let n = (q - 1) as usize;
            let mut exp = vec![0u32; 2 * n];
            let mut log = vec![0u32; q as usize];
            let mut x = 1u32;
            for i in 0..n {
                exp[i] = x;
                exp[i + n] = x;
                log[x as usize] = i as u32;
                x = field.slow_mul(x, primitive);
            }
            (log, exp)
        } else {
            (Vec::new(), Vec::new())
        };
        let inner = Arc::get_mut(&mut field.0).expect("fresh field is uniquely owned");
        inner.primitive = primitive;
        inner.log = log;
        inner.exp = exp;
        field
    }

    fn find_primitive(&self) -> u32 {
        let q = self.q();
        if q == 2 {
            return 1;
        }
        let order = (q - 1) as u64;
        let primes = prime_divisors_u64(order);
        (2..q)
            .find(|&g| primes.iter().all(|&r| self.slow_pow(g, order / r) != 1))
            .expect("the multiplicative group of a finite field is cyclic")
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn k(&self) -> u32 {
        self.0.k
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    /// Monic modulus (low degree first) for proper extensions.
    pub fn modulus(&self) -> Option<&[u32]> {
        if self.0.k == 1 {
            None
        } else {
            Some(&self.0.modulus)
        }
    }

    /// A generator of the multiplicative group.
    pub fn primitive_element(&self) -> u32 {
        self.0.primitive
    }

    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.q()
    }

    pub fn check(&self, code: u64) -> Result<u32> {
        if code < self.q() as u64 {
            Ok(code as u32)
        } else {
            Err(Error::InvalidElement { code, q: self.q() as u64 })
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p() as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let f = &*self.0;
        if f.p == 2 {
            a ^ b
        } else if f.k == 1 {
            let s = a + b;
            if s >= f.p {
                s - f.p
            } else {
                s
            }
        } else if !f.add.is_empty() {
            f.add[(a * f.q + b) as usize]
        } else {
            digit_add(f.p, f.k, a, b)
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        let f = &*self.0;
        if f.p == 2 || a == 0 {
            a
        } else if f.k == 1 {
            f.p - a
        } else {
            let mut out = 0;
            let mut place = 1;
            let mut rest = a;
            for _ in 0..f.k {
                let d = rest % f.p;
                rest /= f.p;
                out += ((f.p - d) % f.p) * place;
                place *= f.p;
            }
            out
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let f = &*self.0;
        if !f.exp.is_empty() {
            f.exp[(f.log[a as usize] + f.log[b as usize]) as usize]
        } else {
            self.slow_mul(a, b)
        }
    }

    /// Multiplicative inverse. Panics on zero; see [`Field::checked_inv`].
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.checked_inv(a).expect("inversion of zero")
    }

    pub fn checked_inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let f = &*self.0;
        if !f.exp.is_empty() {
            let n = f.q - 1;
            Some(f.exp[((n - f.log[a as usize]) % n) as usize])
        } else {
            Some(self.slow_pow(a, f.q as u64 - 2))
        }
    }

    pub fn div(&self, a: u32, b: u32) -> u32 {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let f = &*self.0;
        if !f.exp.is_empty() {
            let n = (f.q - 1) as u64;
            let l = (f.log[a as usize] as u64 * (e % n)) % n;
            f.exp[l as usize]
        } else {
            self.slow_pow(a, e)
        }
    }

    /// The unique `b` with `b^p = a`.
    pub fn pth_root(&self, a: u32) -> u32 {
        self.pow(a, (self.q() / self.p()) as u64)
    }

    /// Exact arithmetic dispatch: `b` is the second operand for `Add`/`Mul`,
    /// the exponent for `Pow`, and ignored otherwise.
    pub fn apply(&self, op: FieldOp, a: u64, b: u64) -> Result<u32> {
        let a = self.check(a)?;
        match op {
            FieldOp::Add => Ok(self.add(a, self.check(b)?)),
            FieldOp::Mul => Ok(self.mul(a, self.check(b)?)),
            FieldOp::Neg => Ok(self.neg(a)),
            FieldOp::Inv => self.checked_inv(a).ok_or(Error::InverseOfZero),
            FieldOp::Pow => Ok(self.pow(a, b)),
        }
    }

    fn slow_pow(&self, mut a: u32, mut e: u64) -> u32 {
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.slow_mul(acc, a);
            }
            a = self.slow_mul(a, a);
            e >>= 1;
        }
        acc
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let f = &*self.0;
        let p = f.p as u64;
        if f.k == 1 {
            return ((a as u64 * b as u64) % p) as u32;
        }
        let k = f.k as usize;
        let da = digits(f.p, f.k, a);
        let db = digits(f.p, f.k, b);
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for i in (k..2 * k - 1).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..k {
                let m = f.modulus[j] as u64;
                prod[i - k + j] = (prod[i - k + j] + (p - c) * m) % p;
            }
        }
        let mut code = 0u64;
        for &c in prod[..k].iter().rev() {
            code = code * p + c;
        }
        code as u32
    }
}

fn digits(p: u32, k: u32, mut a: u32) -> Vec<u32> {
    (0..k)
        .map(|_| {
            let d = a % p;
            a /= p;
            d
        })
        .collect()
}

fn digit_add(p: u32, k: u32, mut a: u32, mut b: u32) -> u32 {
    let mut out = 0;
    let mut place = 1;
    for _ in 0..k {
        let d = (a % p + b % p) % p;
        a /= p;
        b /= p;
        out += d * place;
        place *= p;
    }
    out
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.k == other.0.k && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k() == 1 {
            write!(f, "GF({})", self.p())
        } else {
            write!(f, "GF({}^{})", self.p(), self.k())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_basics() {
        let f2 = Field::new(2, 1).unwrap();
        assert_eq!(f2.modulus(), None);
        assert_eq!(f2.add(1, 1), 0);
        let f5 = Field::new(5, 1).unwrap();
        assert_eq!(f5.inv(2), 3);
        assert_eq!(f5.apply(FieldOp::Inv, 0, 0), Err(Error::InverseOfZero));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Field::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert_eq!(Field::new(2, 0).unwrap_err(), Error::InvalidDegree(0));
        assert!(matches!(Field::new(2, 31), Err(Error::OrderTooLarge { .. })));
        assert!(Field::new(2, 30).is_ok());
    }

    #[test]
    fn f4_modulus_and_product() {
        let f4 = Field::new(2, 2).unwrap();
        assert_eq!(f4.modulus(), Some(&[1, 1, 1][..]));
        // x * x = x + 1
        assert_eq!(f4.mul(2, 2), 3);
    }

    /// Brute-force multiplication table from schoolbook polynomial
    /// arithmetic over F_p, independent of the field's tables.
    fn brute_mul(p: u32, modulus: &[u32], a: u32, b: u32) -> u32 {
        let k = modulus.len() - 1;
        let da: Vec<u32> = (0..k).map(|i| (a / p.pow(i as u32)) % p).collect();
        let db: Vec<u32> = (0..k).map(|i| (b / p.pow(i as u32)) % p).collect();
        let mut prod = vec![0u32; 2 * k];
        for i in 0..k {
            for j in 0..k {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        for i in (k..2 * k).rev() {
            let c = prod[i];
            for j in 0..=k {
                prod[i - k + j] = (prod[i - k + j] + (p - c) * modulus[j]) % p;
            }
        }
        (0..k).map(|i| prod[i] * p.pow(i as u32)).sum()
    }

    #[test]
    fn extension_multiplication_matches_brute_force() {
        for (p, k) in [(2u64, 2u32), (2, 3), (3, 2), (2, 4), (5, 2), (3, 3)] {
            let f = Field::new(p, k).unwrap();
            let m = f.modulus().unwrap().to_vec();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), brute_mul(p as u32, &m, a, b), "{f}: {a}*{b}");
                }
            }
        }
    }

    #[test]
    fn lexicographic_modulus_choice() {
        // Monic irreducible cubics over F_2: x^3+x+1 -> (1,1,0), x^3+x^2+1 -> (1,0,1).
        assert_eq!(Field::new(2, 3).unwrap().modulus(), Some(&[1, 0, 1, 1][..]));
        // Over F_3 the quadratics x^2+1 -> (1,0) is least.
        assert_eq!(Field::new(3, 2).unwrap().modulus(), Some(&[1, 0, 1][..]));
    }

    #[test]
    fn field_axioms_exhaustive() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32, 49, 64] {
            let f = Field::of_order(q).unwrap();
            let els: Vec<u32> = f.elements().collect();
            for &a in &els {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in &els {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn large_field_without_tables() {
        let f = Field::new(2, 20).unwrap();
        assert!(f.0.exp.is_empty());
        let g = f.primitive_element();
        assert_eq!(f.pow(g, (f.q() - 1) as u64), 1);
        let a = 123_456;
        assert_eq!(f.mul(a, f.inv(a)), 1);
        let big_prime = Field::new(1_000_003, 1).unwrap();
        assert_eq!(big_prime.mul(1_000_002, 1_000_002), 1);
    }

    #[test]
    fn explicit_modulus() {
        let f = Field::with_modulus(2, &[1, 1, 0, 1]).unwrap();
        assert_eq!(f.modulus(), Some(&[1, 1, 0, 1][..]));
        assert_ne!(f, Field::new(2, 3).unwrap());
        assert!(matches!(Field::with_modulus(2, &[1, 0, 1]), Err(Error::InvalidModulus(_))));
        assert_eq!(Field::with_modulus(2, &[1, 1, 1]).unwrap(), Field::new(2, 2).unwrap());
    }
}
