//! Factorization over finite fields: squarefree decomposition, distinct-degree
//! factorization, and Cantor-Zassenhaus equal-degree splitting.

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::Poly;

/// Product of all irreducible factors of one degree that occur with one
/// multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DdfComponent {
    /// Degree of each irreducible factor in `product`.
    pub degree: usize,
    pub multiplicity: u32,
    pub product: Poly,
}

impl DdfComponent {
    pub fn factor_count(&self) -> usize {
        self.product.degree().unwrap_or(0) / self.degree
    }
}

/// Squarefree decomposition followed by distinct-degree factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeProfile {
    pub components: Vec<DdfComponent>,
}

impl DegreeProfile {
    /// Every irreducible factor as `(degree, multiplicity)`, sorted.
    pub fn multiset(&self) -> Vec<(usize, u32)> {
        let mut out: Vec<(usize, u32)> = self
            .components
            .iter()
            .flat_map(|c| std::iter::repeat_n((c.degree, c.multiplicity), c.factor_count()))
            .collect();
        out.sort_unstable();
        out
    }

    /// Total degree accounted for, counting multiplicities.
    pub fn total_degree(&self) -> usize {
        self.components
            .iter()
            .map(|c| c.product.degree().unwrap_or(0) * c.multiplicity as usize)
            .sum()
    }
}

/// Monic squarefree factors `(s_i, i)` with `monic(f) = prod s_i^i`.
pub fn squarefree(f: &Poly) -> Result<Vec<(Poly, u32)>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    squarefree_into(&f.monic(), 1, &mut out);
    out.sort_by_key(|(_, m)| *m);
    Ok(out)
}

fn squarefree_into(f: &Poly, scale: u32, out: &mut Vec<(Poly, u32)>) {
    if f.degree() == Some(0) {
        return;
    }
    let field = f.field();
    let mut c = f.gcd(&f.derivative()).unwrap();
    let mut w = f.div_exact(&c);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c).unwrap();
        let fac = w.div_exact(&y);
        if !fac.is_one() {
            push_merged(out, fac, i * scale);
        }
        w = y;
        c = c.div_exact(&w);
        i += 1;
    }
    if !c.is_one() {
        // c is a p-th power
        let p = field.p() as usize;
        let root: Vec<u32> = c.coeffs().iter().step_by(p).map(|&a| field.pth_root(a)).collect();
        squarefree_into(&Poly::from_raw(field, root), scale * field.p(), out);
    }
}

fn push_merged(out: &mut Vec<(Poly, u32)>, fac: Poly, m: u32) {
    if let Some(slot) = out.iter_mut().find(|(_, k)| *k == m) {
        slot.0 = slot.0.mul(&fac);
    } else {
        out.push((fac, m));
    }
}

/// Distinct-degree factorization of a monic squarefree polynomial:
/// `(i, product of all irreducible factors of degree i)`.
pub fn distinct_degree(f: &Poly) -> Vec<(usize, Poly)> {
    let field = f.field();
    let q = field.q() as u64;
    let x = Poly::x(field);
    let mut rest = f.monic();
    let mut out = Vec::new();
    let mut h = x.rem(&rest);
    let mut i = 1;
    while rest.degree().unwrap_or(0) >= 2 * i {
        h = h.pow_mod(q, &rest);
        let g = h.sub(&x).gcd(&rest).unwrap();
        if !g.is_one() {
            rest = rest.div_exact(&g);
            h = h.rem(&rest);
            out.push((i, g));
        }
        i += 1;
    }
    if rest.degree().unwrap_or(0) > 0 {
        out.push((rest.degree().unwrap(), rest));
    }
    out
}

/// Squarefree + distinct-degree factorization of a nonzero polynomial.
pub fn degree_profile(f: &Poly) -> Result<DegreeProfile> {
    let mut components = Vec::new();
    for (s, m) in squarefree(f)? {
        for (degree, product) in distinct_degree(&s) {
            components.push(DdfComponent { degree, multiplicity: m, product });
        }
    }
    components.sort_by_key(|c| (c.degree, c.multiplicity));
    Ok(DegreeProfile { components })
}

/// Splits a monic squarefree `f` whose irreducible factors all have degree
/// `degree` into those factors.
pub fn equal_degree(f: &Poly, degree: usize, rng: &mut impl Rng) -> Vec<Poly> {
    let n = f.degree().unwrap_or(0);
    if n == degree {
        return vec![f.monic()];
    }
    if n == 0 {
        return Vec::new();
    }
    let field = f.field();
    let q = field.q();
    loop {
        let a = Poly::from_raw(field, (0..n).map(|_| rng.random_range(0..q)).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let g = a.gcd(f).unwrap();
        let candidate = if !g.is_one() {
            g
        } else {
            let b = splitting_element(&a, degree, f);
            b.gcd(f).unwrap()
        };
        let cd = candidate.degree().unwrap_or(0);
        if cd > 0 && cd < n {
            let other = f.div_exact(&candidate);
            let mut out = equal_degree(&candidate, degree, rng);
            out.extend(equal_degree(&other, degree, rng));
            return out;
        }
    }
}

fn splitting_element(a: &Poly, degree: usize, f: &Poly) -> Poly {
    let field = f.field();
    if field.p() == 2 {
        // trace map a + a^2 + ... + a^(2^(k*degree - 1))
        let steps = field.k() as usize * degree;
        let mut t = a.rem(f);
        let mut acc = t.clone();
        for _ in 1..steps {
            t = t.mul_mod(&t, f);
            acc = acc.add(&t);
        }
        acc
    } else {
        let exp = (BigUint::from(field.q()).pow(degree as u32) - BigUint::one()) >> 1u32;
        a.pow_mod_big(&exp, f).sub(&Poly::one(field))
    }
}

/// Complete factorization into monic irreducibles with multiplicities,
/// sorted by (degree, coefficients). Equal-degree splitting is seeded.
pub fn factor(f: &Poly, seed: u64) -> Result<Vec<(Poly, u32)>> {
    let profile = degree_profile(f)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for c in profile.components {
        for g in equal_degree(&c.product, c.degree, &mut rng) {
            out.push((g, c.multiplicity));
        }
    }
    out.sort_by(|a, b| (a.0.degree(), a.0.coeffs()).cmp(&(b.0.degree(), b.0.coeffs())));
    Ok(out)
}

/// Number of monic irreducible polynomials of degree `e` over `F_q`.
pub fn count_irreducible(e: u32, q: u64) -> BigUint {
    use num_bigint::BigInt;
    use num_traits::Signed;
    assert!(e >= 1, "degree must be positive");
    let mut acc = BigInt::from(0);
    for d in crate::arith::divisors_u64(e as u64) {
        let mu = crate::arith::mobius(e as u64 / d);
        if mu != 0 {
            acc += BigInt::from(mu) * BigInt::from(q).pow(d as u32);
        }
    }
    let acc = acc / BigInt::from(e);
    debug_assert!(!acc.is_negative());
    acc.to_biguint().unwrap()
}

/// Convenience wrapper matching [`count_irreducible`] for a field.
pub fn count_irreducible_in(e: u32, field: &Field) -> BigUint {
    count_irreducible(e, field.q() as u64)
}
