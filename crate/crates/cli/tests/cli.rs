use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fatpairs")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

fn schema() -> jsonschema::Validator {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/schema/report.schema.json")).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn assert_valid(v: &Value) {
    let s = schema();
    let errors: Vec<String> = s.iter_errors(v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}");
}

fn find<'a>(reports: &'a Value, statistic: &str) -> &'a Value {
    reports.as_array().unwrap().iter().find(|r| r["statistic"] == statistic).unwrap()
}

#[test]
fn fatcheck_order_eight_element() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.txt", "3 3 1\n0 1 0\n1 2 0\n0 0 1\n");
    let o = run(&["fatcheck", "--matrix", &m]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["is_fat"], true);
    assert_eq!(v["e"], 2);
    assert_eq!(v["is_ppd"], false);
}

#[test]
fn fatcheck_ppd_witness() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.txt", "4 2 1\n0 1 0 0\n0 0 1 0\n0 0 0 1\n1 1 0 0\n");
    let v = json(&run(&["fatcheck", "--matrix", &m, "--ppd", "4"]));
    assert_eq!(v["is_ppd"], true);
    assert_eq!(v["witness_primes"], serde_json::json!(["5"]));
    assert_eq!(run(&["fatcheck", "--matrix", &m, "--ppd", "2"]).status.code(), Some(1));
}

#[test]
fn malformed_matrix_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.txt", "2 2 1\n1 0\n0 7\n");
    let o = run(&["fatcheck", "--matrix", &m]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    assert_eq!(run(&["fatcheck", "--matrix", "/nonexistent/m.txt"]).status.code(), Some(1));
}

#[test]
fn exact_gl_3_2() {
    let o = run(&["exact", "--group", "gl", "--d", "3", "--q", "2"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_valid(&v);
    let r = find(&v, "red_and_fat");
    assert_eq!(r["value"], serde_json::json!({"num": "1", "den": "36"}));
    assert_eq!(r["bound"], serde_json::json!({"num": "1", "den": "4"}));
    assert_eq!(r["holds"], true);
    let again = run(&["exact", "--group", "gl", "--d", "3", "--q", "2=2^1", "--workers", "3"]);
    assert_eq!(o.stdout, again.stdout);
}

#[test]
fn exact_over_cap_suggests_alternatives() {
    let o = run(&["exact", "--d", "4", "--q", "3"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("--cap") && err.contains("mc"), "{err}");
}

#[test]
fn monte_carlo_is_reproducible_and_valid() {
    let args = ["mc", "--group", "sl", "--d", "3", "--q", "3", "--pairs", "1000", "--seed", "5", "--workers", "2"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_valid(&v);
    assert_eq!(find(&v, "red_and_fat")["method"], "monte_carlo");
    assert_eq!(find(&v, "red_and_fat")["seed"], 5);
}

#[test]
fn csv_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let o = run(&["exact", "--d", "3", "--q", "2", "--format", "csv", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text, stdout(&o));
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(&reader.headers().unwrap().iter().take(5).collect::<Vec<_>>(), &["statistic", "group", "cell", "value_num", "value_den"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    let r = rows.iter().find(|r| &r[0] == "red_and_fat").unwrap();
    assert_eq!((&r[1], &r[3], &r[4], &r[11]), ("GL(3,2)", "1", "36", "true"));
}

#[test]
fn gaussian_and_bounds() {
    let v = json(&run(&["gaussian", "--d", "4", "--w", "2", "--q", "2"]));
    assert_eq!(v["value"], "35");
    assert_eq!(run(&["gaussian", "--d", "2", "--w", "3", "--q", "2"]).status.code(), Some(1));
    let v = json(&run(&["bounds", "--d", "3", "--q", "2"]));
    assert_eq!(v["cells"][0]["fat_bound"], serde_json::json!({"num": "1", "den": "18"}));
    assert_eq!(v["harmonic_below_ln2"], true);
}

#[test]
fn reduce_round_trips_induced_pair() {
    let dir = tempfile::tempdir().unwrap();
    let g = "3 2 1\n1 0 0\n0 0 1\n0 1 1\n";
    let p = write(dir.path(), "pair.txt", &format!("{g}\n{g}"));
    let o = run(&["reduce", "--pair", &p]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["n"], 2);
    assert_eq!(v["all_checks_pass"], true);
    let text = v["induced_pair"].as_str().unwrap();
    let (a, b) = fatpairs::textfmt::parse_pair(text).unwrap();
    assert_eq!(format!("{}\n{}", fatpairs::textfmt::write_matrix(&a), fatpairs::textfmt::write_matrix(&b)), text);
    assert_eq!(fatpairs::textfmt::write_matrix(&a), "2 2 1\n0 1\n1 1\n");
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["exact", "--d", "3", "--q", "6"]).status.code(), Some(1));
    assert_eq!(run(&["exact", "--d", "3", "--q", "2", "--bogus"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "--level", "desk"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
