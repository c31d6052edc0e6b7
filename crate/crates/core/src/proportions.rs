//! Counting and proportions: Gaussian coefficients, `fat(e)`, stabilizer
//! proportions, and exact or Monte Carlo statistics of reducible fat pairs.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::factor::count_irreducible;
use crate::fatness::fat_test;
use crate::field::Field;
use crate::groups::{stream_rng, GroupDescriptor};
use crate::matrix::Matrix;
use crate::modspin;
use crate::subspace::Subspace;

/// Default cap on `|G|` for exact pair statistics.
pub const DEFAULT_PAIR_CAP: u64 = 20_000;

/// Confidence level of reported Monte Carlo intervals.
pub const CONFIDENCE: f64 = 0.99;

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// `q^(1-d)` as an exact rational.
pub fn q_power_bound(q: u64, d: usize) -> BigRational {
    ratio(1, BigUint::from(q).pow(d as u32 - 1))
}

/// Number of `w`-dimensional subspaces of `F_q^d`.
pub fn gaussian(d: usize, w: usize, q: u64) -> Result<BigUint> {
    if w > d {
        return Err(Error::OutOfRange(format!("w = {w} exceeds d = {d}")));
    }
    if q < 2 {
        return Err(Error::OutOfRange(format!("q = {q} is not a field order")));
    }
    let qb = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..w {
        num *= qb.pow((d - i) as u32) - 1u32;
        den *= qb.pow((i + 1) as u32) - 1u32;
    }
    debug_assert!((&num % &den).is_zero());
    Ok(num / den)
}

#[derive(Debug, Clone, PartialEq)]
pub struct InverseGaussianSum {
    /// `sum_{i=1}^{ceil(d/2)-1} 1 / binom(d,i)_q`
    pub sum: BigRational,
    /// `q^(1-d)`
    pub bound: BigRational,
    pub holds: bool,
}

pub fn inverse_gaussian_sum(d: usize, q: u64) -> Result<InverseGaussianSum> {
    if d < 3 {
        return Err(Error::OutOfRange(format!("d must be at least 3, got {d}")));
    }
    let mut sum = BigRational::zero();
    for i in 1..d.div_ceil(2) {
        sum += ratio(1, gaussian(d, i, q)?);
    }
    let bound = q_power_bound(q, d);
    let holds = sum < bound;
    Ok(InverseGaussianSum { sum, bound, holds })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FatMode {
    /// `count_irreducible(e,q) / (q^e - 1)`
    Formula,
    /// Count elements of `GL(e,q)` with irreducible characteristic polynomial.
    Exhaustive { cap: u64 },
}

/// Proportion of elements of `GL(e,q)` whose characteristic polynomial is irreducible.
pub fn fat_e(e: usize, field: &Field, mode: FatMode) -> Result<BigRational> {
    if e < 1 {
        return Err(Error::OutOfRange("e must be positive".into()));
    }
    let q = field.q() as u64;
    match mode {
        FatMode::Formula => Ok(ratio(count_irreducible(e as u32, q), BigUint::from(q).pow(e as u32) - 1u32)),
        FatMode::Exhaustive { cap } => {
            if e == 1 {
                return Ok(BigRational::one());
            }
            let g = GroupDescriptor::gl(field, e)?;
            let mut hits = 0u64;
            for m in g.enumerate(cap)? {
                if fat_test(&m)?.e == Some(e) {
                    hits += 1;
                }
            }
            Ok(ratio(hits, g.order()))
        }
    }
}

/// Proportion of fat elements of degree `e` in the stabilizer `G_W`.
pub fn fat_in_stabilizer(g: &GroupDescriptor, w: &Subspace, e: usize, cap: u64) -> Result<BigRational> {
    let d = g.d();
    if 2 * e <= d || e > d {
        return Err(Error::OutOfRange(format!("fat degree {e} must satisfy {d}/2 < e <= {d}")));
    }
    let (mut hits, mut total) = (0u64, 0u64);
    for m in g.stabilizer_elements(w, cap)? {
        total += 1;
        if fat_test(&m)?.e == Some(e) {
            hits += 1;
        }
    }
    Ok(ratio(hits, total))
}

/// Whether `G_W` can contain fat elements of degree `e`: `dim W` in `[0, d-e]` or `[e, d]`.
pub fn stabilizer_admissible(d: usize, w: usize, e: usize) -> bool {
    w + e <= d || w >= e
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellBound {
    pub e1: usize,
    pub e2: usize,
    /// `2 fat(e1) fat(e2) q^(1-d)`
    pub fat_bound: BigRational,
    /// `2 / (e1 e2) q^(1-d)`
    pub coarse_bound: BigRational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsTable {
    pub d: usize,
    pub q: u64,
    pub cells: Vec<CellBound>,
    /// `q^(1-d)`
    pub red_and_fat_bound: BigRational,
    /// `2 q^(1-d)`
    pub red_if_fat_bound: BigRational,
    /// `sum_{i=ceil((d+1)/2)}^{d-1} 1/i`
    pub harmonic_tail: BigRational,
    /// Rational enclosure of `ln 2`.
    pub ln2: (BigRational, BigRational),
    pub harmonic_below_ln2: bool,
}

/// Rational lower and upper bounds on `ln 2` from `sum 1/(k 2^k)`.
pub fn ln2_interval(terms: u32) -> (BigRational, BigRational) {
    let mut lo = BigRational::zero();
    for k in 1..=terms {
        lo += ratio(1, BigUint::from(k) << k as usize);
    }
    let tail = ratio(1, BigUint::from(terms + 1) << terms as usize);
    let hi = &lo + tail;
    (lo, hi)
}

pub fn harmonic_tail(d: usize) -> BigRational {
    let mut s = BigRational::zero();
    for i in (d + 2) / 2..d {
        s += ratio(1, i as u64);
    }
    s
}

pub fn bounds_table(d: usize, field: &Field) -> Result<BoundsTable> {
    if d < 3 {
        return Err(Error::OutOfRange(format!("d must be at least 3, got {d}")));
    }
    let q = field.q() as u64;
    let qb = q_power_bound(q, d);
    let two = BigRational::from_integer(2.into());
    let fats: BTreeMap<usize, BigRational> =
        (d / 2 + 1..d).map(|e| Ok((e, fat_e(e, field, FatMode::Formula)?))).collect::<Result<_>>()?;
    let mut cells = Vec::new();
    for (&e1, f1) in &fats {
        for (&e2, f2) in &fats {
            cells.push(CellBound {
                e1,
                e2,
                fat_bound: &two * f1 * f2 * &qb,
                coarse_bound: &two * ratio(1, (e1 * e2) as u64) * &qb,
            });
        }
    }
    let ln2 = ln2_interval(64);
    let harmonic = harmonic_tail(d);
    Ok(BoundsTable {
        d,
        q,
        cells,
        red_if_fat_bound: &two * &qb,
        red_and_fat_bound: qb,
        harmonic_below_ln2: harmonic < ln2.0,
        harmonic_tail: harmonic,
        ln2,
    })
}

/// Two-sided Wilson score interval for `hits` successes in `n` trials.
pub fn wilson_interval(hits: u64, n: u64, confidence: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let z = Normal::standard().inverse_cdf(0.5 + confidence / 2.0);
    let n = n as f64;
    let p = hits as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Tallies of fat and reducible fat pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PairCounts {
    /// Elements examined (each pair contributes two in Monte Carlo mode).
    pub elements: u128,
    pub fat_elements: BTreeMap<usize, u128>,
    pub pairs: u128,
    pub fat_pairs: BTreeMap<(usize, usize), u128>,
    pub reducible: BTreeMap<(usize, usize), u128>,
}

impl PairCounts {
    pub fn merge(&mut self, other: &PairCounts) {
        self.elements += other.elements;
        self.pairs += other.pairs;
        for (k, v) in &other.fat_elements {
            *self.fat_elements.entry(*k).or_default() += v;
        }
        for (k, v) in &other.fat_pairs {
            *self.fat_pairs.entry(*k).or_default() += v;
        }
        for (k, v) in &other.reducible {
            *self.reducible.entry(*k).or_default() += v;
        }
    }

    pub fn fat_total(&self) -> u128 {
        self.fat_elements.values().sum()
    }

    pub fn fat_pair_total(&self) -> u128 {
        self.fat_pairs.values().sum()
    }

    pub fn reducible_total(&self) -> u128 {
        self.reducible.values().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    FatE,
    FatOverall,
    RedAndFat,
    RedIfFat,
    RedAndFatE1e2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exhaustive,
    MonteCarlo,
    Formula,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactValue {
    pub num: String,
    pub den: String,
}

impl ExactValue {
    pub fn from_ratio(r: &BigRational) -> ExactValue {
        ExactValue { num: r.numer().to_string(), den: r.denom().to_string() }
    }

    pub fn to_ratio(&self) -> Result<BigRational> {
        let parse = |s: &str| s.parse::<BigInt>().map_err(|e| Error::OutOfRange(format!("bad integer {s:?}: {e}")));
        Ok(ratio(parse(&self.num)?, parse(&self.den)?))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Exact(ExactValue),
    Estimate { estimate: f64, ci_low: f64, ci_high: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProportionReport {
    pub statistic: Statistic,
    pub group: String,
    /// Fat degree for `fat_e`, `[e1, e2]` for per-cell statistics.
    pub cell: Option<Vec<usize>>,
    /// `None` when undefined (no fat pairs observed).
    pub value: Option<Value>,
    pub bound: Option<ExactValue>,
    pub bound_expr: Option<String>,
    /// Exact: value strictly below the bound. Monte Carlo: `true` if the whole
    /// interval is below the bound, `false` if it is entirely at or above it,
    /// `None` if it straddles the bound.
    pub holds: Option<bool>,
    pub method: Method,
    pub sample_size: u128,
    pub seed: Option<u64>,
}

impl ProportionReport {
    /// Exact value as a rational, when present.
    pub fn exact(&self) -> Option<BigRational> {
        match &self.value {
            Some(Value::Exact(v)) => v.to_ratio().ok(),
            _ => None,
        }
    }

    pub fn violated(&self) -> bool {
        self.holds == Some(false)
    }
}

/// Pair statistics and the bound each one is checked against.
#[derive(Debug, Clone)]
pub struct PairStats {
    pub group: GroupDescriptor,
    pub counts: PairCounts,
    pub method: Method,
    pub seed: Option<u64>,
    /// Conjugacy classes of fat elements used as first coordinates (exact mode).
    pub classes: Option<usize>,
}

fn fat_bounds(g: &GroupDescriptor) -> Result<BTreeMap<usize, BigRational>> {
    let d = g.d();
    (d / 2 + 1..=d).map(|e| Ok((e, fat_e(e, g.field(), FatMode::Formula)?))).collect()
}

impl PairStats {
    fn q(&self) -> u64 {
        self.group.q() as u64
    }

    /// `red_and_fat` over all pairs, exact mode only.
    pub fn red_and_fat(&self) -> BigRational {
        ratio(self.counts.reducible_total(), self.counts.pairs)
    }

    /// `red_if_fat`, undefined without fat pairs.
    pub fn red_if_fat(&self) -> Option<BigRational> {
        let f = self.counts.fat_pair_total();
        (f > 0).then(|| ratio(self.counts.reducible_total(), f))
    }

    pub fn cell_value(&self, cell: (usize, usize)) -> BigRational {
        ratio(self.counts.reducible.get(&cell).copied().unwrap_or(0), self.counts.pairs)
    }

    /// Every fat cell `(e1, e2)` with `d/2 < e1, e2 <= d`.
    pub fn cells(&self) -> Vec<(usize, usize)> {
        let d = self.group.d();
        let r = d / 2 + 1..=d;
        r.clone().flat_map(|a| r.clone().map(move |b| (a, b))).collect()
    }

    pub fn reports(&self) -> Result<Vec<ProportionReport>> {
        let d = self.group.d();
        let q = self.q();
        let qb = q_power_bound(q, d);
        let two = BigRational::from_integer(2.into());
        let fats = fat_bounds(&self.group)?;
        let c = &self.counts;
        let base = ProportionReport {
            statistic: Statistic::FatE,
            group: self.group.name(),
            cell: None,
            value: None,
            bound: None,
            bound_expr: None,
            holds: None,
            method: self.method,
            sample_size: c.pairs,
            seed: self.seed,
        };
        let mut out = Vec::new();
        for e in d / 2 + 1..=d {
            let bound = ratio(1, e as u64);
            out.push(self.report(
                ProportionReport { statistic: Statistic::FatE, cell: Some(vec![e]), sample_size: c.elements, ..base.clone() },
                c.fat_elements.get(&e).copied().unwrap_or(0),
                c.elements,
                Some((bound, "1/e".into())),
            ));
        }
        out.push(self.report(
            ProportionReport { statistic: Statistic::FatOverall, sample_size: c.elements, ..base.clone() },
            c.fat_total(),
            c.elements,
            None,
        ));
        out.push(self.report(
            ProportionReport { statistic: Statistic::RedAndFat, ..base.clone() },
            c.reducible_total(),
            c.pairs,
            Some((qb.clone(), "q^(1-d)".into())),
        ));
        let fat_pairs = c.fat_pair_total();
        out.push(self.report(
            ProportionReport { statistic: Statistic::RedIfFat, sample_size: fat_pairs, ..base.clone() },
            c.reducible_total(),
            fat_pairs,
            Some((&two * &qb, "2*q^(1-d)".into())),
        ));
        for (e1, e2) in self.cells() {
            let bound = &two * &fats[&e1] * &fats[&e2] * &qb;
            out.push(self.report(
                ProportionReport { statistic: Statistic::RedAndFatE1e2, cell: Some(vec![e1, e2]), ..base.clone() },
                c.reducible.get(&(e1, e2)).copied().unwrap_or(0),
                c.pairs,
                Some((bound, "2*fat(e1)*fat(e2)*q^(1-d)".into())),
            ));
        }
        Ok(out)
    }

    fn report(
        &self,
        mut r: ProportionReport,
        hits: u128,
        n: u128,
        bound: Option<(BigRational, String)>,
    ) -> ProportionReport {
        // Monte Carlo verdicts: true when the interval lies below the bound,
        // false when it lies at or above it, undecided otherwise.
        let mut range: Option<(BigRational, BigRational)> = None;
        if n == 0 {
            r.value = None;
        } else if self.method == Method::MonteCarlo {
            let (lo, hi) = wilson_interval(hits as u64, n as u64, CONFIDENCE);
            r.value = Some(Value::Estimate { estimate: hits as f64 / n as f64, ci_low: lo, ci_high: hi });
            range = BigRational::from_float(lo).zip(BigRational::from_float(hi));
        } else {
            let v = ratio(hits, n);
            r.value = Some(Value::Exact(ExactValue::from_ratio(&v)));
            range = Some((v.clone(), v));
        }
        if let Some((b, expr)) = bound {
            r.holds = range.and_then(|(lo, hi)| {
                if hi < b {
                    Some(true)
                } else if lo >= b {
                    Some(false)
                } else {
                    None
                }
            });
            r.bound = Some(ExactValue::from_ratio(&b));
            r.bound_expr = Some(expr);
        }
        r
    }
}

/// Whether the pair leaves a proper nonzero subspace invariant. Pairs with a
/// fat degree equal to `d` are irreducible without a test.
pub fn pair_is_reducible(g1: &Matrix, g2: &Matrix, e1: usize, e2: usize, rng: &mut impl Rng) -> Result<bool> {
    if e1.max(e2) == g1.rows() {
        return Ok(false);
    }
    Ok(!modspin::is_irreducible(&[g1.clone(), g2.clone()], rng)?.is_irreducible())
}

/// Partition of `subset` (indices into `elements`) into classes under
/// conjugation by all of `elements`; returns `(representative, class size)`
/// with the representative the first member in enumeration order.
pub fn conjugacy_classes(elements: &[Matrix], subset: &[usize]) -> Vec<(usize, u64)> {
    let index: HashMap<u128, usize> =
        elements.iter().enumerate().map(|(i, m)| (m.code().expect("small matrix"), i)).collect();
    let inverses: Vec<Matrix> = elements.iter().map(|m| m.inverse().expect("group element")).collect();
    let mut seen = vec![false; elements.len()];
    let mut out = Vec::new();
    for &i in subset {
        if seen[i] {
            continue;
        }
        let mut size = 0u64;
        for (h, hi) in elements.iter().zip(&inverses) {
            let c = hi.mul(&elements[i]).mul(h);
            let j = index[&c.code().unwrap()];
            if !seen[j] {
                seen[j] = true;
                size += 1;
            }
        }
        out.push((i, size));
    }
    out
}

/// Exact pair statistics by enumeration, with `g1` running over conjugacy
/// class representatives of fat elements weighted by class size.
pub fn exact_pair_stats(g: &GroupDescriptor, cap: u64, workers: usize) -> Result<PairStats> {
    let elements: Vec<Matrix> = g.enumerate(cap)?.collect();
    let mut counts = PairCounts { elements: elements.len() as u128, ..Default::default() };
    let mut fat: Vec<(usize, usize)> = Vec::new();
    for (i, m) in elements.iter().enumerate() {
        if let Some(e) = fat_test(m)?.e {
            fat.push((i, e));
            *counts.fat_elements.entry(e).or_default() += 1;
        }
    }
    counts.pairs = (elements.len() as u128).pow(2);
    for (&a, &na) in &counts.fat_elements {
        for (&b, &nb) in &counts.fat_elements {
            counts.fat_pairs.insert((a, b), na * nb);
        }
    }
    let fat_idx: Vec<usize> = fat.iter().map(|&(i, _)| i).collect();
    let degree: HashMap<usize, usize> = fat.iter().copied().collect();
    let reps = conjugacy_classes(&elements, &fat_idx);
    let workers = workers.max(1);
    let chunk = reps.len().div_ceil(workers).max(1);
    let partials: Vec<Result<BTreeMap<(usize, usize), u128>>> = std::thread::scope(|s| {
        let handles: Vec<_> = reps
            .chunks(chunk)
            .map(|part| {
                let (elements, fat, degree) = (&elements, &fat, &degree);
                s.spawn(move || -> Result<BTreeMap<(usize, usize), u128>> {
                    let mut rng = stream_rng(0, 0);
                    let mut red = BTreeMap::new();
                    for &(i, size) in part {
                        let e1 = degree[&i];
                        for &(j, e2) in fat {
                            if pair_is_reducible(&elements[i], &elements[j], e1, e2, &mut rng)? {
                                *red.entry((e1, e2)).or_default() += size as u128;
                            }
                        }
                    }
                    Ok(red)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    for p in partials {
        for (k, v) in p? {
            *counts.reducible.entry(k).or_default() += v;
        }
    }
    Ok(PairStats { group: g.clone(), counts, method: Method::Exhaustive, seed: None, classes: Some(reps.len()) })
}

/// Monte Carlo pair statistics from `n_pairs` uniform pairs. Worker `w`
/// draws its share from stream `w` of `seed`, so results depend only on
/// `(seed, workers)`.
pub fn mc_pair_stats(g: &GroupDescriptor, n_pairs: u64, seed: u64, workers: usize) -> Result<PairStats> {
    let workers = workers.max(1) as u64;
    let partials: Vec<Result<PairCounts>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let n = n_pairs / workers + u64::from(w < n_pairs % workers);
                s.spawn(move || mc_worker(g, n, &mut stream_rng(seed, w)))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut counts = PairCounts::default();
    for p in partials {
        counts.merge(&p?);
    }
    Ok(PairStats { group: g.clone(), counts, method: Method::MonteCarlo, seed: Some(seed), classes: None })
}

fn mc_worker(g: &GroupDescriptor, n: u64, rng: &mut impl Rng) -> Result<PairCounts> {
    let mut c = PairCounts { elements: 2 * n as u128, pairs: n as u128, ..Default::default() };
    for _ in 0..n {
        let g1 = g.sample(rng);
        let g2 = g.sample(rng);
        let e1 = fat_test(&g1)?.e;
        let e2 = fat_test(&g2)?.e;
        for e in [e1, e2].into_iter().flatten() {
            *c.fat_elements.entry(e).or_default() += 1;
        }
        if let (Some(e1), Some(e2)) = (e1, e2) {
            *c.fat_pairs.entry((e1, e2)).or_default() += 1;
            if pair_is_reducible(&g1, &g2, e1, e2, rng)? {
                *c.reducible.entry((e1, e2)).or_default() += 1;
            }
        }
    }
    Ok(c)
}

/// Decimal rendering of a rational for human-readable output.
pub fn approx(r: &BigRational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::random_subspace;

    fn gf(q: u64) -> Field {
        Field::of_order(q).unwrap()
    }

    #[test]
    fn gaussian_examples_and_identities() {
        assert_eq!(gaussian(5, 0, 7).unwrap(), BigUint::one());
        assert_eq!(gaussian(4, 2, 2).unwrap(), BigUint::from(35u32));
        assert_eq!(gaussian(3, 1, 2).unwrap(), BigUint::from(7u32));
        assert!(gaussian(2, 3, 2).is_err());
        for q in [2u64, 3, 4, 5] {
            for d in 1..=12 {
                for w in 0..=d {
                    assert_eq!(gaussian(d, w, q).unwrap(), gaussian(d, d - w, q).unwrap());
                    if w >= 1 {
                        let rhs = gaussian(d - 1, w - 1, q).unwrap()
                            + BigUint::from(q).pow(w as u32) * gaussian(d - 1, w, q).unwrap_or_default();
                        assert_eq!(gaussian(d, w, q).unwrap(), rhs);
                    }
                }
            }
        }
        for q in [2u64, 3] {
            for d in 0..=4 {
                for w in 0..=d {
                    let n = Subspace::enumerate(&gf(q), d, w).unwrap().len();
                    assert_eq!(gaussian(d, w, q).unwrap(), BigUint::from(n));
                }
            }
        }
    }

    #[test]
    fn inverse_gaussian_sums() {
        let s = inverse_gaussian_sum(3, 2).unwrap();
        assert_eq!((s.sum.clone(), s.bound.clone()), (ratio(1, 7), ratio(1, 4)));
        let s = inverse_gaussian_sum(4, 2).unwrap();
        assert_eq!((s.sum.clone(), s.bound.clone()), (ratio(1, 15), ratio(1, 8)));
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            for d in 3..=24 {
                assert!(inverse_gaussian_sum(d, q).unwrap().holds, "d={d} q={q}");
            }
        }
        assert!(inverse_gaussian_sum(2, 2).is_err());
    }

    #[test]
    fn fat_e_modes_agree() {
        assert_eq!(fat_e(2, &gf(2), FatMode::Formula).unwrap(), ratio(1, 3));
        assert_eq!(fat_e(3, &gf(2), FatMode::Formula).unwrap(), ratio(2, 7));
        for (e, q) in [(2usize, 2u64), (2, 3), (3, 2), (2, 4), (3, 3)] {
            let f = fat_e(e, &gf(q), FatMode::Formula).unwrap();
            let x = fat_e(e, &gf(q), FatMode::Exhaustive { cap: 100_000 }).unwrap();
            assert_eq!(f, x, "e={e} q={q}");
            assert!(ratio(1, e as u64 + 1) <= f && f < ratio(1, e as u64));
        }
    }

    #[test]
    fn stabilizer_proportions() {
        let f = gf(2);
        let g = GroupDescriptor::gl(&f, 3).unwrap();
        let e1 = Subspace::span(&f, 3, &[vec![1, 0, 0]]).unwrap();
        assert_eq!(fat_in_stabilizer(&g, &e1, 2, 1000).unwrap(), ratio(1, 3));
        let e12 = Subspace::span(&f, 3, &[vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        assert_eq!(fat_in_stabilizer(&g, &e12, 2, 1000).unwrap(), ratio(1, 3));
        let zero = Subspace::zero(&f, 3);
        assert_eq!(fat_in_stabilizer(&g, &zero, 2, 1000).unwrap(), ratio(1, 3));
        let f2 = gf(2);
        let g4 = GroupDescriptor::gl(&f2, 4).unwrap();
        let w = Subspace::span(&f2, 4, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]).unwrap();
        assert!(!stabilizer_admissible(4, 2, 3));
        assert_eq!(fat_in_stabilizer(&g4, &w, 3, 100_000).unwrap(), BigRational::zero());
        let l = Subspace::span(&f2, 4, &[vec![0, 0, 1, 1]]).unwrap();
        assert_eq!(fat_in_stabilizer(&g4, &l, 3, 100_000).unwrap(), fat_e(3, &f2, FatMode::Formula).unwrap());
    }

    #[test]
    fn bounds_table_examples() {
        let t = bounds_table(3, &gf(2)).unwrap();
        assert_eq!(t.cells.len(), 1);
        assert_eq!(t.cells[0].fat_bound, ratio(1, 18));
        assert_eq!(t.red_and_fat_bound, ratio(1, 4));
        assert_eq!(bounds_table(4, &gf(3)).unwrap().cells.len(), 1);
        let t = bounds_table(10, &gf(5)).unwrap();
        assert_eq!(t.harmonic_tail, ratio(1, 6) + ratio(1, 7) + ratio(1, 8) + ratio(1, 9));
        let (lo, hi) = ln2_interval(64);
        assert!(approx(&lo) <= std::f64::consts::LN_2 && std::f64::consts::LN_2 <= approx(&hi));
        for d in 3..=64 {
            assert!(bounds_table(d, &gf(2)).unwrap().harmonic_below_ln2, "d={d}");
        }
        for c in &bounds_table(7, &gf(3)).unwrap().cells {
            assert!(c.fat_bound <= c.coarse_bound);
        }
    }

    #[test]
    fn wilson_is_sane() {
        let (lo, hi) = wilson_interval(0, 1000, 0.99);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.01);
        let (lo, hi) = wilson_interval(500, 1000, 0.99);
        assert!(lo < 0.5 && 0.5 < hi);
        assert!((hi - 0.5 - (0.5 - lo)).abs() < 1e-12);
    }

    /// Every ordered pair, no conjugacy reduction and no shortcut for
    /// fat degree `d`.
    fn brute_force_counts(g: &GroupDescriptor) -> PairCounts {
        let elements: Vec<Matrix> = g.enumerate(u64::MAX).unwrap().collect();
        let degrees: Vec<Option<usize>> = elements.iter().map(|m| fat_test(m).unwrap().e).collect();
        let mut c = PairCounts { elements: elements.len() as u128, pairs: (elements.len() as u128).pow(2), ..Default::default() };
        for e in degrees.iter().flatten() {
            *c.fat_elements.entry(*e).or_default() += 1;
        }
        for (a, ea) in elements.iter().zip(&degrees) {
            for (b, eb) in elements.iter().zip(&degrees) {
                if let (Some(x), Some(y)) = (ea, eb) {
                    *c.fat_pairs.entry((*x, *y)).or_default() += 1;
                    let gens = [a.clone(), b.clone()];
                    if !modspin::is_irreducible_exhaustive(&gens, 1000).unwrap().is_irreducible() {
                        *c.reducible.entry((*x, *y)).or_default() += 1;
                    }
                }
            }
        }
        c
    }

    #[test]
    fn exact_stats_match_brute_force_gl_3_2() {
        let g = GroupDescriptor::gl(&gf(2), 3).unwrap();
        let stats = exact_pair_stats(&g, DEFAULT_PAIR_CAP, 3).unwrap();
        assert_eq!(stats.counts, brute_force_counts(&g));
        assert!(stats.red_and_fat() < ratio(1, 4));
        assert!(stats.red_if_fat().unwrap() < ratio(1, 2));
        let reports = stats.reports().unwrap();
        assert!(reports.iter().all(|r| !r.violated()));
        let cells: BigRational = stats.cells().into_iter().map(|c| stats.cell_value(c)).sum();
        assert_eq!(cells, stats.red_and_fat());
        let single = exact_pair_stats(&g, DEFAULT_PAIR_CAP, 1).unwrap();
        assert_eq!(single.counts, stats.counts);
    }

    #[test]
    fn fat_proportion_in_sl_equals_formula_below_d() {
        let f = gf(3);
        let g = GroupDescriptor::sl(&f, 3).unwrap();
        let hits = g.enumerate(u64::MAX).unwrap().filter(|m| fat_test(m).unwrap().e == Some(2)).count();
        assert_eq!(ratio(hits as u64, g.order()), fat_e(2, &f, FatMode::Formula).unwrap());
    }

    #[test]
    fn conjugation_preserves_fatness_and_reducibility() {
        let f = gf(3);
        let g = GroupDescriptor::gl(&f, 3).unwrap();
        let mut rng = stream_rng(21, 0);
        for _ in 0..200 {
            let w = random_subspace(&f, 3, 1, &mut rng);
            let (a, b) = (g.sample_stabilizer(&w, &mut rng), g.sample(&mut rng));
            let h = g.sample(&mut rng);
            let hi = h.inverse().unwrap();
            let (ca, cb) = (hi.mul(&a).mul(&h), hi.mul(&b).mul(&h));
            assert_eq!(fat_test(&a).unwrap().e, fat_test(&ca).unwrap().e);
            let r1 = modspin::is_irreducible_exhaustive(&[a, b], 1000).unwrap().is_irreducible();
            let r2 = modspin::is_irreducible_exhaustive(&[ca, cb], 1000).unwrap().is_irreducible();
            assert_eq!(r1, r2);
        }
    }

    #[test]
    fn monte_carlo_verdicts_are_three_valued() {
        let g = GroupDescriptor::gl(&gf(2), 3).unwrap();
        let verdict = |hits: u128, n: u128| {
            let mut counts = PairCounts { elements: 2 * n, pairs: n, ..Default::default() };
            counts.reducible.insert((2, 2), hits);
            let stats = PairStats { group: g.clone(), counts, method: Method::MonteCarlo, seed: Some(1), classes: None };
            stats.reports().unwrap().into_iter().find(|r| r.statistic == Statistic::RedAndFat).unwrap().holds
        };
        assert_eq!(verdict(2, 1000), Some(true));
        assert_eq!(verdict(20, 100), None);
        assert_eq!(verdict(600, 1000), Some(false));
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let g = GroupDescriptor::gl(&gf(2), 4).unwrap();
        let a = mc_pair_stats(&g, 2000, 7, 3).unwrap();
        let b = mc_pair_stats(&g, 2000, 7, 3).unwrap();
        assert_eq!(a.counts, b.counts);
        assert_eq!(a.counts.pairs, 2000);
        assert_eq!(a.reports().unwrap(), b.reports().unwrap());
    }
}
