use std::error::Error;
use std::fs;
use std::path::Path;

use fatpairs::acceptance::{run_all, SuiteConfig};
use fatpairs::fatness::{fat_test, ppd_from_fat, ppd_test};
use fatpairs::proportions::{bounds_table, exact_pair_stats, gaussian, mc_pair_stats, ExactValue, ProportionReport, Value};
use fatpairs::reduction::{reduce_pair_with_cap, ScanMode};
use fatpairs::textfmt::{parse_matrix, parse_pair, write_matrix, write_subspace};
use serde::Serialize;
use serde_json::json;

use crate::args::{Command, Format, Level, OutputArgs};

pub type CmdResult = Result<Report, Box<dyn Error>>;

/// Text for stdout, and whether a bound or certificate check failed.
pub struct Report {
    pub text: String,
    pub violated: bool,
}

fn read(path: &Path) -> Result<String, Box<dyn Error>> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn pretty(v: &impl Serialize) -> Result<String, Box<dyn Error>> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn exact(r: &fatpairs::BigRational) -> ExactValue {
    ExactValue::from_ratio(r)
}

pub fn run(command: Command) -> CmdResult {
    match command {
        Command::Fatcheck { matrix, ppd } => fatcheck(&matrix, ppd),
        Command::Gaussian { d, w, q } => {
            let v = gaussian(d, w, q.q())?;
            Ok(Report { text: pretty(&json!({ "d": d, "w": w, "q": q.q(), "value": v.to_string() }))?, violated: false })
        }
        Command::Bounds { d, q } => bounds(d, &q.field()?),
        Command::Exact { group, cap, out } => {
            let stats = exact_pair_stats(&group.descriptor()?, cap, out.workers as usize)?;
            emit_reports(&stats.reports()?, &out)
        }
        Command::Mc { group, pairs, seed, out } => {
            let stats = mc_pair_stats(&group.descriptor()?, pairs, seed, out.workers as usize)?;
            emit_reports(&stats.reports()?, &out)
        }
        Command::Reduce { pair, cap, out } => {
            let r = reduce(&pair, cap)?;
            write_out(out.as_deref(), &r.text)?;
            Ok(r)
        }
        Command::Verify { level: Level::Desk, seed, workers } => {
            let mut config = SuiteConfig { seed, ..SuiteConfig::default() };
            if let Some(w) = workers {
                config.workers = w as usize;
            }
            let outcomes = run_all(config, |o| println!("{}", o.line()));
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            Ok(Report { text: format!("{} passed, {failed} failed\n", outcomes.len() - failed), violated: failed > 0 })
        }
    }
}

fn fatcheck(path: &Path, ppd: Option<usize>) -> CmdResult {
    let g = parse_matrix(&read(path)?)?;
    let v = fat_test(&g)?;
    let p = match (ppd, v.e) {
        (Some(e), _) => Some(ppd_test(&g, e)?),
        (None, Some(e)) => Some(ppd_from_fat(&v, e)?),
        (None, None) => None,
    };
    let body = json!({
        "is_fat": v.is_fat,
        "e": v.e,
        "profile": v.profile,
        "factor": v.factor.as_ref().map(fatpairs::textfmt::write_poly),
        "is_ppd": p.as_ref().is_some_and(|p| p.is_ppd),
        "ppd_degree": p.as_ref().map(|p| p.e),
        "witness_primes": p.map(|p| p.witness_primes.iter().map(|r| r.to_string()).collect::<Vec<_>>()).unwrap_or_default(),
    });
    Ok(Report { text: pretty(&body)?, violated: false })
}

fn bounds(d: usize, field: &fatpairs::Field) -> CmdResult {
    let t = bounds_table(d, field)?;
    let cells: Vec<_> = t
        .cells
        .iter()
        .map(|c| json!({ "e1": c.e1, "e2": c.e2, "fat_bound": exact(&c.fat_bound), "coarse_bound": exact(&c.coarse_bound) }))
        .collect();
    let body = json!({
        "d": t.d,
        "q": t.q,
        "cells": cells,
        "red_and_fat_bound": exact(&t.red_and_fat_bound),
        "red_if_fat_bound": exact(&t.red_if_fat_bound),
        "harmonic_tail": exact(&t.harmonic_tail),
        "ln2_lower": exact(&t.ln2.0),
        "ln2_upper": exact(&t.ln2.1),
        "harmonic_below_ln2": t.harmonic_below_ln2,
    });
    Ok(Report { text: pretty(&body)?, violated: !t.harmonic_below_ln2 })
}

#[derive(Serialize)]
struct CsvRow {
    statistic: String,
    group: String,
    cell: String,
    value_num: Option<String>,
    value_den: Option<String>,
    estimate: Option<f64>,
    ci_low: Option<f64>,
    ci_high: Option<f64>,
    bound_num: Option<String>,
    bound_den: Option<String>,
    bound_expr: Option<String>,
    holds: Option<bool>,
    method: String,
    sample_size: String,
    seed: Option<u64>,
}

fn plain(v: &impl Serialize) -> String {
    serde_json::to_value(v).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default()
}

fn csv_rows(reports: &[ProportionReport]) -> Result<String, Box<dyn Error>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in reports {
        let (mut num, mut den, mut est, mut lo, mut hi) = (None, None, None, None, None);
        match &r.value {
            Some(Value::Exact(v)) => (num, den) = (Some(v.num.clone()), Some(v.den.clone())),
            Some(Value::Estimate { estimate, ci_low, ci_high }) => (est, lo, hi) = (Some(*estimate), Some(*ci_low), Some(*ci_high)),
            None => {}
        }
        w.serialize(CsvRow {
            statistic: plain(&r.statistic),
            group: r.group.clone(),
            cell: r.cell.as_ref().map(|c| c.iter().map(usize::to_string).collect::<Vec<_>>().join(";")).unwrap_or_default(),
            value_num: num,
            value_den: den,
            estimate: est,
            ci_low: lo,
            ci_high: hi,
            bound_num: r.bound.as_ref().map(|b| b.num.clone()),
            bound_den: r.bound.as_ref().map(|b| b.den.clone()),
            bound_expr: r.bound_expr.clone(),
            holds: r.holds,
            method: plain(&r.method),
            sample_size: r.sample_size.to_string(),
            seed: r.seed,
        })?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Box<dyn Error>> {
    if let Some(p) = path {
        fs::write(p, text).map_err(|e| format!("{}: {e}", p.display()))?;
    }
    Ok(())
}

fn emit_reports(reports: &[ProportionReport], out: &OutputArgs) -> CmdResult {
    let text = match out.format {
        Format::Json => pretty(&reports)?,
        Format::Csv => csv_rows(reports)?,
    };
    for r in reports.iter().filter(|r| r.violated()) {
        let value = match &r.value {
            Some(Value::Exact(v)) => format!("{}/{}", v.num, v.den),
            Some(Value::Estimate { ci_high, .. }) => format!("upper {ci_high}"),
            None => "undefined".into(),
        };
        let bound = r.bound.as_ref().map_or(String::new(), |b| format!("{}/{}", b.num, b.den));
        eprintln!("bound violated: {:?} {:?} on {}: {value} vs {bound}", r.statistic, r.cell, r.group);
    }
    write_out(out.out.as_deref(), &text)?;
    Ok(Report { text, violated: reports.iter().any(ProportionReport::violated) })
}

fn reduce(path: &Path, cap: u64) -> CmdResult {
    let (g1, g2) = parse_pair(&read(path)?)?;
    let c = reduce_pair_with_cap(&g1, &g2, cap)?;
    let checks = json!({
        "u_dimensions": c.checks.u_dimensions,
        "u_invariant": c.checks.u_invariant,
        "u_irreducible": c.checks.u_irreducible,
        "x_invariant": c.checks.x_invariant,
        "y_invariant": c.checks.y_invariant,
        "y_meets_u_trivially": c.checks.y_meets_u_trivially,
        "y_maximal": c.checks.y_maximal,
        "n_exceeds_half": c.checks.n_exceeds_half,
        "induced_irreducible": c.checks.induced_irreducible,
        "induced_fat_degrees": c.checks.induced_fat_degrees,
    });
    let body = json!({
        "e1": c.e1,
        "e2": c.e2,
        "n": c.n,
        "dim_x": c.x.dim(),
        "dim_y": c.y.dim(),
        "u1": write_subspace(&c.u1),
        "u2": write_subspace(&c.u2),
        "x": write_subspace(&c.x),
        "y": write_subspace(&c.y),
        "scan": match c.scan { ScanMode::Exhaustive => "exhaustive", ScanMode::Sampled => "sampled" },
        "checks": checks,
        "all_checks_pass": c.checks.all(),
        "induced_pair": format!("{}\n{}", write_matrix(&c.induced.0), write_matrix(&c.induced.1)),
    });
    Ok(Report { text: pretty(&body)?, violated: !c.checks.all() })
}
