//! Dense univariate polynomials over a [`Field`], low degree first.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::arith::prime_divisors_u64;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<u32>,
}

impl Poly {
    /// Validates every coefficient code; trailing zeros are dropped.
    pub fn new(field: &Field, coeffs: Vec<u32>) -> Result<Poly> {
        for &c in &coeffs {
            field.check(c as u64)?;
        }
        Ok(Poly::from_raw(field, coeffs))
    }

    pub(crate) fn from_raw(field: &Field, mut coeffs: Vec<u32>) -> Poly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &Field) -> Poly {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, 1)
    }

    pub fn x(field: &Field) -> Poly {
        Poly::from_raw(field, vec![0, 1])
    }

    pub fn constant(field: &Field, c: u32) -> Poly {
        Poly::from_raw(field, vec![c])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn leading(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            0 | 1 => self.clone(),
            lc => self.scale(self.field.inv(lc)),
        }
    }

    fn same_field(&self, other: &Poly) {
        assert!(self.field == other.field, "polynomials over different fields");
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.same_field(other);
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Poly::from_raw(f, c)
    }

    pub fn neg(&self) -> Poly {
        let c = self.coeffs.iter().map(|&a| self.field.neg(a)).collect();
        Poly::from_raw(&self.field, c)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u32) -> Poly {
        let v = self.coeffs.iter().map(|&a| self.field.mul(a, c)).collect();
        Poly::from_raw(&self.field, v)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.same_field(other);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        let mut out = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::from_raw(f, out)
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        if self.field != divisor.field {
            return Err(Error::FieldMismatch);
        }
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = &self.field;
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return Ok((Poly::zero(f), self.clone()));
        }
        let lead_inv = f.inv(divisor.leading());
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u32; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = f.mul(rem[i], lead_inv);
            if c == 0 {
                continue;
            }
            quot[i - dd] = c;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                rem[idx] = f.sub(rem[idx], f.mul(c, d));
            }
        }
        rem.truncate(dd);
        Ok((Poly::from_raw(f, quot), Poly::from_raw(f, rem)))
    }

    /// Remainder modulo a nonzero polynomial over the same field.
    pub fn rem(&self, modulus: &Poly) -> Poly {
        self.div_rem(modulus).expect("nonzero modulus over the same field").1
    }

    /// Exact quotient; panics if `divisor` is zero.
    pub fn div_exact(&self, divisor: &Poly) -> Poly {
        let (q, r) = self.div_rem(divisor).expect("nonzero divisor over the same field");
        debug_assert!(r.is_zero(), "inexact division");
        q
    }

    /// Monic gcd; `gcd(f, 0) = monic(f)`.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| f.mul(a, f.from_int(i as i64)))
            .collect();
        Poly::from_raw(f, c)
    }

    pub fn eval(&self, x: u32) -> u32 {
        self.coeffs.iter().rev().fold(0, |acc, &c| self.field.add(self.field.mul(acc, x), c))
    }

    /// `f(A)` by Horner's rule over matrices.
    pub fn eval_at_matrix(&self, a: &Matrix) -> Result<Matrix> {
        if a.field() != &self.field {
            return Err(Error::FieldMismatch);
        }
        if !a.is_square() {
            return Err(Error::DimensionMismatch("f(A) needs a square matrix".into()));
        }
        let n = a.rows();
        let mut acc = Matrix::zeros(&self.field, n, n);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(a);
            for i in 0..n {
                let v = self.field.add(acc.get(i, i), c);
                acc.set(i, i, v);
            }
        }
        Ok(acc)
    }

    pub fn mul_mod(&self, other: &Poly, modulus: &Poly) -> Poly {
        self.mul(other).rem(modulus)
    }

    pub fn pow_mod(&self, exp: u64, modulus: &Poly) -> Poly {
        let mut base = self.rem(modulus);
        let mut acc = Poly::one(&self.field).rem(modulus);
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, modulus);
            }
            base = base.mul_mod(&base, modulus);
            e >>= 1;
        }
        acc
    }

    pub fn pow_mod_big(&self, exp: &BigUint, modulus: &Poly) -> Poly {
        let mut acc = Poly::one(&self.field).rem(modulus);
        if exp.is_zero() {
            return acc;
        }
        let base = self.rem(modulus);
        for i in (0..exp.bits()).rev() {
            acc = acc.mul_mod(&acc, modulus);
            if exp.bit(i) {
                acc = acc.mul_mod(&base, modulus);
            }
        }
        acc
    }

    /// Companion matrix for the row-vector action: `e_i C = e_{i+1}` and the
    /// last row holds `-c_0, ..., -c_{n-1}`, so `charpoly(C) = f`.
    pub fn companion(&self) -> Result<Matrix> {
        let n = match self.degree() {
            Some(n) if n >= 1 && self.is_monic() => n,
            _ => return Err(Error::OutOfRange("companion matrix needs a monic polynomial of degree >= 1".into())),
        };
        let f = &self.field;
        let mut m = Matrix::zeros(f, n, n);
        for i in 0..n - 1 {
            m.set(i, i + 1, 1);
        }
        for j in 0..n {
            m.set(n - 1, j, f.neg(self.coeffs[j]));
        }
        Ok(m)
    }

    /// Rabin's irreducibility test.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let f = self.monic();
        let q = self.field.q() as u64;
        let x = Poly::x(&self.field);
        // frob[i] = x^(q^i) mod f
        let mut frob = vec![x.rem(&f)];
        for i in 1..=n {
            let next = frob[i - 1].pow_mod(q, &f);
            frob.push(next);
        }
        if frob[n] != x.rem(&f) {
            return false;
        }
        prime_divisors_u64(n as u64).into_iter().all(|r| {
            let h = frob[n / r as usize].sub(&x);
            h.gcd(&f).unwrap().is_one()
        })
    }
}

/// Lexicographically least monic irreducible polynomial of degree `k`,
/// comparing coefficient tuples `(c_0, ..., c_{k-1})` from `c_0` upward.
pub(crate) fn least_irreducible(field: &Field, k: usize) -> Poly {
    let q = field.q() as u64;
    let total = q.pow(k as u32);
    // candidates with c_0 = 0 are divisible by x
    for n in q.pow(k as u32 - 1)..total {
        // c_0 is the most significant digit of n
        let mut coeffs = vec![0u32; k + 1];
        let mut rest = n;
        for i in (0..k).rev() {
            coeffs[i] = (rest % q) as u32;
            rest /= q;
        }
        coeffs[k] = 1;
        let cand = Poly::from_raw(field, coeffs);
        if cand.is_irreducible() {
            return cand;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({:?})", self.field, self.coeffs)
    }
}

impl fmt::Display for Poly {
    /// Space separated codes, low degree first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Field {
        Field::new(2, 1).unwrap()
    }

    fn p(field: &Field, c: &[u32]) -> Poly {
        Poly::new(field, c.to_vec()).unwrap()
    }

    #[test]
    fn gcd_examples() {
        let f = f2();
        assert_eq!(p(&f, &[0, 1, 1]).gcd(&p(&f, &[0, 1])).unwrap(), p(&f, &[0, 1]));
        let f5 = Field::new(5, 1).unwrap();
        assert_eq!(p(&f5, &[2, 4]).gcd(&Poly::zero(&f5)).unwrap(), p(&f5, &[3, 1]));
    }

    #[test]
    fn divmod_example() {
        let f = f2();
        let (q, r) = p(&f, &[1, 0, 0, 1]).div_rem(&p(&f, &[1, 1])).unwrap();
        assert_eq!(q, p(&f, &[1, 1, 1]));
        assert!(r.is_zero());
        assert_eq!(q.mul(&p(&f, &[1, 1])), p(&f, &[1, 0, 0, 1]));
        assert_eq!(p(&f, &[1]).div_rem(&Poly::zero(&f)).unwrap_err(), Error::DivisionByZero);
        let f3 = Field::new(3, 1).unwrap();
        assert_eq!(p(&f, &[1]).div_rem(&p(&f3, &[1])).unwrap_err(), Error::FieldMismatch);
    }

    #[test]
    fn eval_at_identity_char_two() {
        let f = f2();
        let m = p(&f, &[1, 1]).eval_at_matrix(&Matrix::identity(&f, 2)).unwrap();
        assert_eq!(m, Matrix::zeros(&f, 2, 2));
    }

    #[test]
    fn irreducible_counts_by_brute_force() {
        // Count monic irreducibles of small degree by testing for any factor of
        // degree <= n/2 through exhaustive trial division.
        for q in [2u64, 3, 4] {
            let field = Field::of_order(q).unwrap();
            for n in 1..=4usize {
                let all: Vec<Poly> = tests_support::monic_of_degree(&field, n);
                let rabin = all.iter().filter(|f| f.is_irreducible()).count();
                let trial = all
                    .iter()
                    .filter(|f| {
                        (1..=n / 2).all(|m| {
                            tests_support::monic_of_degree(&field, m).iter().all(|g| !f.rem(g).is_zero())
                        })
                    })
                    .count();
                assert_eq!(rabin, trial, "q={q} n={n}");
            }
        }
    }

    #[test]
    fn companion_shape() {
        let f = f2();
        let c = p(&f, &[1, 1, 1]).companion().unwrap();
        assert_eq!(c.row(0), &[0, 1]);
        assert_eq!(c.row(1), &[1, 1]);
        assert!(Poly::zero(&f).companion().is_err());
    }

    #[test]
    fn derivative_char_p() {
        let f3 = Field::new(3, 1).unwrap();
        // d/dx (x^3 + 2x) = 2
        assert_eq!(p(&f3, &[0, 2, 0, 1]).derivative(), p(&f3, &[2]));
    }

    #[test]
    fn pow_mod_agrees() {
        let f = Field::new(3, 1).unwrap();
        let m = p(&f, &[2, 1, 0, 1, 1]);
        let x = Poly::x(&f);
        for e in [0u64, 1, 5, 80, 81, 1000] {
            assert_eq!(x.pow_mod(e, &m), x.pow_mod_big(&BigUint::from(e), &m));
        }
    }
}
