//! The acceptance suite: twelve end-to-end checks with runtime limits.
//! Exact checks compare rationals with no tolerance; Monte Carlo checks use
//! a pinned seed and 99% Wilson intervals.

use std::collections::HashMap;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::Zero;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::Result;
use crate::fatness::{element_order, fat_test, ppd_from_fat};
use crate::field::Field;
use crate::groups::{random_subspace, sample_gl, stream_rng, GroupDescriptor, DEFAULT_ENUMERATION_CAP};
use crate::matrix::Matrix;
use crate::modspin::{is_irreducible_exhaustive, is_irreducible_norton, DEFAULT_ORACLE_CAP};
use crate::proportions::{
    bounds_table, exact_pair_stats, fat_e, fat_in_stabilizer, gaussian, inverse_gaussian_sum, mc_pair_stats, q_power_bound,
    ratio, stabilizer_admissible, FatMode, PairStats, Statistic, Value, DEFAULT_PAIR_CAP,
};
use crate::reduction::{classify_invariant_subspace, invariant_subspaces, reduce_pair, InvariantPosition};
use crate::subspace::Subspace;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 42;

/// Significance level of the uniformity test.
pub const CHI_SQUARE_ALPHA: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seed: u64,
    pub workers: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(8);
        SuiteConfig { seed: DEFAULT_SEED, workers }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Duration,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "{} [{:>2}] {} ({:.2}s / {}s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.elapsed.as_secs_f64(),
            self.limit.as_secs(),
            self.detail
        )
    }
}

type Check = fn(&Suite) -> Result<(bool, String)>;

pub struct Criterion {
    pub id: u32,
    pub title: &'static str,
    pub limit: Duration,
    check: Check,
}

pub fn criteria() -> Vec<Criterion> {
    let c = |id, title, secs, check| Criterion { id, title, limit: Duration::from_secs(secs), check };
    vec![
        c(1, "exact pair bounds, GL(3,2)", 10, exact_gl32 as Check),
        c(2, "exact pair bounds, GL(3,3) and SL(3,3)", 300, exact_q3),
        c(3, "per-cell bounds on enumerated groups", 300, cells),
        c(4, "fat(e) formula against enumeration", 60, fat_e_modes),
        c(5, "fat proportions in subspace stabilizers", 120, stabilizers),
        c(6, "Gaussian coefficients", 30, gaussians),
        c(7, "inverse Gaussian sums and harmonic tails", 5, inverse_sums),
        c(8, "reduction certificates", 600, reductions),
        c(9, "fat elements that are not ppd, GL(3,3)", 60, ppd_gap),
        c(10, "Norton test against spin oracle", 120, oracle_equivalence),
        c(11, "Monte Carlo bounds, GL(5,2) and GL(4,3)", 300, monte_carlo),
        c(12, "sampling uniformity", 10, uniformity),
    ]
}

/// Shared state across criteria, so per-cell checks reuse the exact runs.
pub struct Suite {
    pub config: SuiteConfig,
    exact: Mutex<HashMap<String, PairStats>>,
}

impl Suite {
    pub fn new(config: SuiteConfig) -> Suite {
        Suite { config, exact: Mutex::new(HashMap::new()) }
    }

    fn exact(&self, g: &GroupDescriptor) -> Result<PairStats> {
        if let Some(s) = self.exact.lock().unwrap().get(&g.name()) {
            return Ok(s.clone());
        }
        let s = exact_pair_stats(g, DEFAULT_PAIR_CAP, self.config.workers)?;
        self.exact.lock().unwrap().insert(g.name(), s.clone());
        Ok(s)
    }

    pub fn run(&self, c: &Criterion) -> Outcome {
        let start = Instant::now();
        let result = (c.check)(self);
        let elapsed = start.elapsed();
        let (ok, mut detail) = result.unwrap_or_else(|e| (false, format!("error: {e}")));
        let in_time = elapsed <= c.limit;
        if !in_time {
            detail.push_str("; over the time limit");
        }
        Outcome { id: c.id, title: c.title, passed: ok && in_time, detail, elapsed, limit: c.limit }
    }
}

/// Runs every criterion in order, calling `each` as outcomes arrive.
pub fn run_all(config: SuiteConfig, mut each: impl FnMut(&Outcome)) -> Vec<Outcome> {
    let suite = Suite::new(config);
    criteria()
        .iter()
        .map(|c| {
            let o = suite.run(c);
            each(&o);
            o
        })
        .collect()
}

fn gf(q: u64) -> Result<Field> {
    Field::of_order(q)
}

fn theorem_bounds(stats: &PairStats) -> (bool, String) {
    let d = stats.group.d();
    let q = stats.group.q() as u64;
    let b1 = q_power_bound(q, d);
    let b2 = &b1 * BigRational::from_integer(2.into());
    let raf = stats.red_and_fat();
    let rif = stats.red_if_fat().unwrap_or_else(BigRational::zero);
    let ok = raf < b1 && rif < b2;
    (ok, format!("{}: red_and_fat = {raf} < {b1}, red_if_fat = {rif} < {b2}", stats.group.name()))
}

fn exact_gl32(s: &Suite) -> Result<(bool, String)> {
    Ok(theorem_bounds(&s.exact(&GroupDescriptor::gl(&gf(2)?, 3)?)?))
}

fn exact_q3(s: &Suite) -> Result<(bool, String)> {
    let f = gf(3)?;
    let a = theorem_bounds(&s.exact(&GroupDescriptor::gl(&f, 3)?)?);
    let b = theorem_bounds(&s.exact(&GroupDescriptor::sl(&f, 3)?)?);
    Ok((a.0 && b.0, format!("{}; {}", a.1, b.1)))
}

fn cells(s: &Suite) -> Result<(bool, String)> {
    let mut ok = true;
    let mut n = 0;
    for g in [GroupDescriptor::gl(&gf(2)?, 3)?, GroupDescriptor::gl(&gf(3)?, 3)?, GroupDescriptor::sl(&gf(3)?, 3)?] {
        let stats = s.exact(&g)?;
        let d = g.d();
        let q = g.q() as u64;
        let qb = q_power_bound(q, d);
        let two = BigRational::from_integer(2.into());
        let mut total = BigRational::zero();
        for (e1, e2) in stats.cells() {
            let v = stats.cell_value((e1, e2));
            total += &v;
            let fine = &two * fat_e(e1, g.field(), FatMode::Formula)? * fat_e(e2, g.field(), FatMode::Formula)? * &qb;
            let coarse = &two * ratio(1, (e1 * e2) as u64) * &qb;
            ok &= v < fine && fine <= coarse;
            n += 1;
        }
        ok &= total == stats.red_and_fat();
        ok &= stats.reports()?.iter().all(|r| !r.violated());
    }
    Ok((ok, format!("{n} cells checked across GL(3,2), GL(3,3), SL(3,3)")))
}

fn fat_e_modes(_: &Suite) -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (e, q) in [(2usize, 2u64), (2, 3), (3, 2), (2, 4), (3, 3)] {
        let f = gf(q)?;
        let formula = fat_e(e, &f, FatMode::Formula)?;
        let counted = fat_e(e, &f, FatMode::Exhaustive { cap: DEFAULT_ENUMERATION_CAP })?;
        ok &= formula == counted && ratio(1, e as u64 + 1) <= formula && formula < ratio(1, e as u64);
        parts.push(format!("fat({e})|q={q} = {formula}"));
    }
    ok &= fat_e(2, &gf(2)?, FatMode::Formula)? == ratio(1, 3);
    Ok((ok, parts.join(", ")))
}

fn stabilizers(_: &Suite) -> Result<(bool, String)> {
    let mut ok = true;
    let mut n = 0;
    for q in [2u64, 3] {
        let f = gf(q)?;
        let d = 3;
        let g = GroupDescriptor::gl(&f, d)?;
        for w in 1..d {
            let basis: Vec<Vec<u32>> = (0..w).map(|i| (0..d).map(|j| u32::from(i == j)).collect()).collect();
            let sub = Subspace::span(&f, d, &basis)?;
            for e in d / 2 + 1..d {
                let got = fat_in_stabilizer(&g, &sub, e, DEFAULT_ENUMERATION_CAP)?;
                let want = if stabilizer_admissible(d, w, e) { fat_e(e, &f, FatMode::Formula)? } else { BigRational::zero() };
                ok &= got == want;
                n += 1;
            }
        }
    }
    Ok((ok, format!("{n} (group, W, e) cases in GL(3,2) and GL(3,3)")))
}

fn gaussians(_: &Suite) -> Result<(bool, String)> {
    let mut ok = true;
    for q in [2u64, 3] {
        let f = gf(q)?;
        for d in 0..=4 {
            for w in 0..=d {
                ok &= gaussian(d, w, q)? == Subspace::enumerate(&f, d, w)?.len().into();
            }
        }
    }
    ok &= gaussian(4, 2, 2)? == 35u32.into();
    for q in [2u64, 3, 4, 5] {
        let qb = num_bigint::BigUint::from(q);
        for d in 1..=12 {
            for w in 0..=d {
                ok &= gaussian(d, w, q)? == gaussian(d, d - w, q)?;
                if w >= 1 {
                    let tail = if w < d { gaussian(d - 1, w, q)? } else { 0u32.into() };
                    ok &= gaussian(d, w, q)? == gaussian(d - 1, w - 1, q)? + qb.pow(w as u32) * tail;
                }
            }
        }
    }
    Ok((ok, "enumeration, symmetry and q-Pascal identities".into()))
}

fn inverse_sums(_: &Suite) -> Result<(bool, String)> {
    let mut ok = true;
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        for d in 3..=24 {
            ok &= inverse_gaussian_sum(d, q)?.holds;
        }
    }
    let f = gf(2)?;
    for d in 3..=64 {
        ok &= bounds_table(d, &f)?.harmonic_below_ln2;
    }
    Ok((ok, "3 <= d <= 24 over 7 fields; harmonic tails for 3 <= d <= 64".into()))
}

/// Certificate and invariant-subspace checks for one reducible pair.
fn check_reducible_pair(a: &Matrix, b: &Matrix) -> Result<bool> {
    let cert = reduce_pair(a, b)?;
    let mut ok = cert.checks.all();
    for w in invariant_subspaces(&[a.clone(), b.clone()])? {
        ok &= classify_invariant_subspace(a, b, &w)? != InvariantPosition::Neither;
    }
    Ok(ok)
}

fn reductions(s: &Suite) -> Result<(bool, String)> {
    let mut ok = true;
    let f2 = gf(2)?;
    let g32 = GroupDescriptor::gl(&f2, 3)?;
    let fat: Vec<Matrix> = g32
        .enumerate(DEFAULT_ENUMERATION_CAP)?
        .filter(|m| fat_test(m).map(|v| v.is_fat).unwrap_or(false))
        .collect();
    let mut swept = 0;
    for a in &fat {
        for b in &fat {
            let gens = [a.clone(), b.clone()];
            if is_irreducible_exhaustive(&gens, DEFAULT_ORACLE_CAP)?.is_irreducible() {
                continue;
            }
            ok &= check_reducible_pair(a, b)?;
            swept += 1;
        }
    }
    let mut detail = vec![format!("GL(3,2): {swept} reducible fat pairs")];
    for (q, stream) in [(2u64, 81u64), (3, 82)] {
        let f = gf(q)?;
        let g = GroupDescriptor::gl(&f, 4)?;
        let mut rng = stream_rng(s.config.seed, stream);
        let mut done = 0;
        while done < 1000 {
            let w = random_subspace(&f, 4, if done % 2 == 0 { 1 } else { 3 }, &mut rng);
            let (a, b) = (g.sample_stabilizer(&w, &mut rng), g.sample_stabilizer(&w, &mut rng));
            if !(fat_test(&a)?.is_fat && fat_test(&b)?.is_fat) {
                continue;
            }
            if is_irreducible_exhaustive(&[a.clone(), b.clone()], DEFAULT_ORACLE_CAP)?.is_irreducible() {
                continue;
            }
            ok &= check_reducible_pair(&a, &b)?;
            done += 1;
        }
        detail.push(format!("GL(4,{q}): {done} pairs"));
    }
    Ok((ok, detail.join(", ")))
}

fn ppd_gap(_: &Suite) -> Result<(bool, String)> {
    let f = gf(3)?;
    let g = GroupDescriptor::gl(&f, 3)?;
    let (mut fat2, mut ppd2, mut order8, mut ok) = (0u64, 0u64, 0u64, true);
    for m in g.enumerate(DEFAULT_ENUMERATION_CAP)? {
        let v = fat_test(&m)?;
        let is_ppd = ppd_from_fat(&v, 2)?.is_ppd;
        let fat = v.e == Some(2);
        ok &= !is_ppd || fat;
        fat2 += fat as u64;
        ppd2 += is_ppd as u64;
        if element_order(&m, 64) == Some(8) {
            order8 += 1;
            ok &= fat && !is_ppd;
        }
    }
    ok &= fat2 > ppd2 && order8 > 0;
    Ok((ok, format!("fat(3,3;2) = {fat2}, ppd(3,3;2) = {ppd2}, order-8 elements = {order8}")))
}

fn oracle_equivalence(s: &Suite) -> Result<(bool, String)> {
    let mut rng = stream_rng(s.config.seed, 100);
    let (mut agree, mut reducible, mut total) = (0, 0, 0);
    for i in 0..1200usize {
        let q = [2u64, 3][i % 2];
        let f = gf(q)?;
        let d = 2 + (i / 2) % 4;
        let gens: Vec<Matrix> = if i % 3 == 0 {
            let g = GroupDescriptor::gl(&f, d)?;
            let w = random_subspace(&f, d, 1 + (i / 3) % (d - 1), &mut rng);
            (0..2).map(|_| g.sample_stabilizer(&w, &mut rng)).collect()
        } else {
            (0..2).map(|_| sample_gl(&f, d, &mut rng)).collect()
        };
        let oracle = is_irreducible_exhaustive(&gens, DEFAULT_ORACLE_CAP)?.is_irreducible();
        let norton = is_irreducible_norton(&gens, &mut rng).map(|r| r.is_irreducible());
        total += 1;
        reducible += (!oracle) as usize;
        agree += (norton.as_ref().ok() == Some(&oracle)) as usize;
    }
    Ok((agree == total, format!("{agree}/{total} agree ({reducible} reducible)")))
}

fn upper(stats: &PairStats, st: Statistic) -> Result<Option<f64>> {
    Ok(stats.reports()?.into_iter().find(|r| r.statistic == st).and_then(|r| match r.value {
        Some(Value::Estimate { ci_high, .. }) => Some(ci_high),
        _ => None,
    }))
}

fn monte_carlo(s: &Suite) -> Result<(bool, String)> {
    let w = s.config.workers;
    let a = mc_pair_stats(&GroupDescriptor::gl(&gf(2)?, 5)?, 200_000, s.config.seed, w)?;
    let b = mc_pair_stats(&GroupDescriptor::gl(&gf(3)?, 4)?, 100_000, s.config.seed, w)?;
    let ua = upper(&a, Statistic::RedAndFat)?;
    let ub = upper(&b, Statistic::RedIfFat)?;
    let ok = ua.is_some_and(|u| u < 1.0 / 16.0) && ub.is_some_and(|u| u < 2.0 / 27.0);
    Ok((
        ok,
        format!(
            "seed {}: GL(5,2) red_and_fat upper {:.6} < 0.0625; GL(4,3) red_if_fat upper {:.6} < {:.6}",
            s.config.seed,
            ua.unwrap_or(f64::NAN),
            ub.unwrap_or(f64::NAN),
            2.0 / 27.0
        ),
    ))
}

fn uniformity(s: &Suite) -> Result<(bool, String)> {
    let f2 = gf(2)?;
    let g = GroupDescriptor::gl(&f2, 2)?;
    let mut rng = stream_rng(s.config.seed, 120);
    let mut counts: HashMap<u128, u64> = HashMap::new();
    let draws = 6000u64;
    for _ in 0..draws {
        *counts.entry(g.sample(&mut rng).code().unwrap()).or_default() += 1;
    }
    let cells = g.order_u64().unwrap();
    let expected = draws as f64 / cells as f64;
    let chi2: f64 = counts.values().map(|&c| (c as f64 - expected).powi(2) / expected).sum::<f64>()
        + (cells - counts.len() as u64) as f64 * expected;
    let critical = ChiSquared::new((cells - 1) as f64).expect("positive degrees of freedom").inverse_cdf(1.0 - CHI_SQUARE_ALPHA);
    let f3 = gf(3)?;
    let sl = GroupDescriptor::sl(&f3, 2)?;
    let det_ok = (0..10_000).all(|_| sl.sample(&mut rng).det() == Ok(1));
    Ok((chi2 < critical && det_ok, format!("chi-square {chi2:.3} < {critical:.3}; SL(2,3) determinants all 1: {det_ok}")))
}
