use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn sslud(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sslud"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = sslud(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn fails_with(args: &[&str], code: i32, needle: &str) {
    let out = sslud(args);
    assert_eq!(out.status.code(), Some(code), "{args:?}");
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains(needle), "{args:?}: {err}");
}

fn data_file(dir: &TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_owned()
}

fn results(path: &Path) -> Value {
    let v: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    v["results"].clone()
}

#[test]
fn fit_builtin() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("fit.json");
    ok(&["fit", "--builtin", "nifty50", "--out", out.to_str().unwrap()]);
    let r = results(&out);
    assert!((r["mu_hat"].as_f64().unwrap() + 2.589).abs() < 2e-3);
    assert_eq!(r["branch"], "negative");
}

#[test]
fn fit_file_with_header() {
    let dir = TempDir::new().unwrap();
    let f = data_file(&dir, "x.csv", "return\n1\n2\n3\n");
    let text = ok(&["fit", &f]);
    assert!(text.contains("positive"), "{text}");
}

#[test]
fn bad_data_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let empty = data_file(&dir, "e.csv", "");
    fails_with(&["fit", &empty], 2, "no observations");
    let nan = data_file(&dir, "n.csv", "1\nNaN\n");
    fails_with(&["fit", &nan], 2, "not a finite number");
    fails_with(&["fit", "/nonexistent/file.csv"], 1, "nonexistent");
    fails_with(&["fit", "--builtin", "nope"], 2, "nope");
}

#[test]
fn invalid_parameters_exit_2() {
    fails_with(&["ci", "--builtin", "nifty50", "--alpha", "1.5"], 2, "alpha");
    fails_with(&["test", "--builtin", "nifty50", "--mu1", "0"], 2, "mu1");
    fails_with(&["power-table", "--mu1-list", "1", "--n-list", "0"], 2, "");
    fails_with(&["test", "--builtin", "nifty50", "--mu1", "-3", "--N", "5"], 2, "");
}

#[test]
fn test_is_seeded() {
    let args = ["test", "--builtin", "nifty50", "--mu1", "-3", "--seed", "7"];
    let a = ok(&args);
    assert_eq!(a, ok(&args));
    assert!(a.contains("decision"), "{a}");
    let hex = ok(&["test", "--builtin", "nifty50", "--mu1", "-3", "--seed", "0x7"]);
    assert_eq!(a, hex);
}

#[test]
fn test_parts() {
    let dir = TempDir::new().unwrap();
    let outside = data_file(&dir, "o.csv", "-2.5\n0.3\n1\n");
    let out = dir.path().join("t.json");
    ok(&["test", &outside, "--mu1", "2", "--out", out.to_str().unwrap()]);
    let r = results(&out);
    assert_eq!(r["part"], "outside_support");
    assert_eq!(r["decision"]["decision"], "accept");

    let beyond = data_file(&dir, "b.csv", "1.5\n");
    ok(&["test", &beyond, "--mu1", "1", "--out", out.to_str().unwrap()]);
    let r = results(&out);
    assert_eq!(r["part"], "beyond_ramp");
    let gamma = r["decision"]["gamma"].as_f64().unwrap();
    // P(all beyond the ramp) = e^-1 / 2 for one draw, so gamma = alpha / P = 0.1 e
    assert!((gamma - 0.1 * std::f64::consts::E).abs() < 1e-12, "{gamma}");
}

#[test]
fn modified_percentile_reports_filter() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("c.json");
    let o = out.to_str().unwrap();
    ok(&[
        "ci",
        "--builtin",
        "nifty50",
        "--method",
        "percentile",
        "--modified",
        "--N",
        "300",
        "--out",
        o,
    ]);
    let f = &results(&out)["interval"]["filter"];
    assert_eq!(f["n_star"].as_u64().unwrap() + f["removed"].as_u64().unwrap(), 300);
}

#[test]
fn power_table_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = |p: &Path| {
        vec![
            "power-table".to_owned(),
            "--mu1-list".into(),
            "-5,3".into(),
            "--n-list".into(),
            "50,100".into(),
            "--precision".into(),
            "full".into(),
            "--out".into(),
            p.to_str().unwrap().into(),
        ]
    };
    let run = |p: &Path| {
        let v = args(p);
        ok(&v.iter().map(String::as_str).collect::<Vec<_>>());
    };
    run(&a);
    let with_threads = sslud(&[
        "--threads",
        "1",
        "power-table",
        "--mu1-list",
        "-5,3",
        "--n-list",
        "50,100",
        "--precision",
        "full",
        "--out",
        b.to_str().unwrap(),
    ]);
    assert!(with_threads.status.success());
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    run(&b);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let mut rdr = csv::Reader::from_path(&a).unwrap();
    let headers = rdr.headers().unwrap().clone();
    assert_eq!(
        headers.iter().collect::<Vec<_>>(),
        ["mu1", "n", "alpha", "N", "log_k", "k", "power", "seed"]
    );
    for row in rdr.records() {
        let row = row.unwrap();
        let power: f64 = row[6].parse().unwrap();
        assert!((0.0..=1.0).contains(&power));
    }
}

#[test]
fn cell_results_do_not_depend_on_the_grid() {
    let single = ok(&["power-table", "--mu1-list", "-5", "--n-list", "100"]);
    let wide = ok(&["power-table", "--mu1-list", "3,-5", "--n-list", "50,100"]);
    let row = single.lines().last().unwrap();
    assert!(wide.lines().any(|l| l == row), "{row} not in\n{wide}");
}

#[test]
fn default_power_table_covers_the_grid() {
    let text = ok(&["power-table", "--N", "100"]);
    let csv_part = text.split("\n\n").last().unwrap();
    assert_eq!(csv_part.lines().count(), 1 + 16 * 5);
}

#[test]
fn ci_study_small_cells() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("s.csv");
    ok(&[
        "ci-study",
        "--mu-list",
        "0.25,-5",
        "--n-list",
        "50",
        "--N",
        "100",
        "--out",
        out.to_str().unwrap(),
    ]);
    let mut rdr = csv::Reader::from_path(&out).unwrap();
    assert_eq!(rdr.records().count(), 2);

    let al = |modified: bool| -> f64 {
        let mut args = vec!["ci-study", "--mu-list", "-5", "--n-list", "50", "--N", "200"];
        if modified {
            args.push("--modified");
        }
        let text = ok(&args);
        let row = text.lines().last().unwrap();
        row.split(',').nth(7).unwrap().parse().unwrap()
    };
    assert!(al(true) <= al(false));
}

#[test]
fn ci_study_percentile_and_per_replication() {
    ok(&[
        "ci-study",
        "--mu-list",
        "-1",
        "--n-list",
        "50",
        "--N",
        "40",
        "--method",
        "percentile",
    ]);
    ok(&[
        "ci-study",
        "--mu-list",
        "-1",
        "--n-list",
        "50",
        "--N",
        "40",
        "--per-replication-variance",
    ]);
}

#[test]
fn max_n_table_reports_discrepancies() {
    let text = ok(&["max-n-table"]);
    assert!(text.contains("differ from the published table"), "{text}");
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("m.json");
    ok(&[
        "max-n-table",
        "--alpha",
        "0.05",
        "--mu1",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    let r = results(&out);
    assert_eq!(r["max_n"], 1);
    assert_eq!(r["discrepancy"], true);
}

#[test]
fn report_flag_writes_json() {
    let dir = TempDir::new().unwrap();
    let rep = dir.path().join("r.json");
    ok(&[
        "--report",
        rep.to_str().unwrap(),
        "power-table",
        "--mu1-list",
        "2",
        "--n-list",
        "50",
    ]);
    let v: Value = serde_json::from_str(&fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(v["command"], "power-table");
    assert_eq!(v["seed"], 42);
}
