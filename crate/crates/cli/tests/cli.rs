use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn padic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_padic"))
        .args(args)
        .output()
        .expect("padic runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

fn write_fn(dir: &Path, name: &str, args: &[&str]) -> String {
    let file = path(dir, name);
    let mut all = vec!["fn", "build"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", &file]);
    let out = padic(&all);
    assert!(out.status.success(), "{}", stderr(&out));
    file
}

#[test]
fn gamma_prints_exact_and_pole_values() {
    let out = padic(&["gamma", "--p", "2", "--alpha", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "-4/3 ≈ -1.333333333333333");
    let out = padic(&["gamma", "--p", "3", "--alpha", "0", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["pole"], 0);
    assert!(v["value"].is_null());
    let out = padic(&["gamma", "--p", "5", "--alpha", "1", "--n", "2"]);
    assert_eq!(stdout(&out).trim(), "1 ≈ 1.000000000000000");
}

#[test]
fn fourier_of_omega_is_omega() {
    let dir = tempfile::tempdir().unwrap();
    let omega = write_fn(dir.path(), "omega.json", &["omega", "--p", "3", "--n", "2"]);
    let input: Value = serde_json::from_str(&std::fs::read_to_string(&omega).unwrap()).unwrap();
    let out = padic(&["fourier", "--in", &omega]);
    assert!(out.status.success());
    let output: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(input, output);
}

#[test]
fn apply_then_solve_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let phi = write_fn(
        dir.path(),
        "phi.json",
        &[
            "lizorkin", "--p", "3", "--l", "-2", "--big-n", "1", "--seed", "7",
        ],
    );
    let d = path(dir.path(), "d.json");
    let back = path(dir.path(), "back.json");
    for (cmd, input, output) in [("apply", &phi, &d), ("solve", &d, &back)] {
        let out = padic(&[
            "op",
            cmd,
            "--symbol",
            "poly:coeffs=1,0,2;alpha=0.5",
            "--in",
            input,
            "--out",
            output,
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
    }
    let read = |f: &str| -> std::collections::BTreeMap<String, (f64, f64)> {
        let v: Value = serde_json::from_str(&std::fs::read_to_string(f).unwrap()).unwrap();
        let coeffs = v["coeffs"].as_array().unwrap().iter();
        coeffs
            .map(|c| {
                (
                    c["m"].to_string(),
                    (c["re"].as_f64().unwrap(), c["im"].as_f64().unwrap()),
                )
            })
            .collect()
    };
    let (a, b) = (read(&phi), read(&back));
    for key in a.keys().chain(b.keys()) {
        let (x, y) = (
            a.get(key).copied().unwrap_or_default(),
            b.get(key).copied().unwrap_or_default(),
        );
        assert!(
            (x.0 - y.0).abs() < 1e-9 && (x.1 - y.1).abs() < 1e-9,
            "{key}: {x:?} vs {y:?}"
        );
    }
}

#[test]
fn positive_root_is_rejected_with_the_hypothesis() {
    let dir = tempfile::tempdir().unwrap();
    let phi = write_fn(
        dir.path(),
        "phi.json",
        &["lizorkin", "--p", "2", "--l", "-2", "--big-n", "1"],
    );
    let out = padic(&["op", "solve", "--symbol", "poly:coeffs=-1,1", "--in", &phi]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.starts_with("error[unsolvable]:"), "{err}");
    assert!(err.contains("P(z) ≠ 0 for all z > 0"));
    assert_eq!(err.lines().count(), 1);
}

#[test]
fn verification_failures_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let omega = write_fn(dir.path(), "omega.json", &["omega", "--p", "2"]);
    let out = padic(&["lizorkin", "check", "--in", &omega]);
    assert_eq!(out.status.code(), Some(2));
    let phi = write_fn(
        dir.path(),
        "phi.json",
        &["lizorkin", "--p", "2", "--kind", "first", "--n", "2"],
    );
    assert_eq!(
        padic(&["lizorkin", "check", "--in", &phi, "--kind", "first"])
            .status
            .code(),
        Some(0)
    );
    let out = padic(&[
        "wavelet",
        "eigencheck",
        "--p",
        "3",
        "--gamma",
        "-1",
        "--j",
        "2",
        "--a",
        "1/3",
        "--alpha",
        "1+1i",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn usage_and_domain_errors_exit_with_one() {
    for args in [
        &["bogus"][..],
        &["gamma", "--p", "2"],
        &["gamma", "--p", "2", "--alpha", "1", "--frobnicate"],
    ] {
        let out = padic(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        let err = stderr(&out);
        assert!(err.starts_with("error[usage]:"), "{err}");
        assert_eq!(err.lines().count(), 1);
    }
    let out = padic(&["gamma", "--p", "4", "--alpha", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error[domain]:"));
    let out = padic(&[
        "fn", "build", "random", "--p", "5", "--n", "2", "--l", "-5", "--big-n", "5",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error[grid-too-large]:"));
    let out = padic(&["selftest", "--criterion", "12"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn max_cells_is_enforced_before_reading_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let file = path(dir.path(), "huge.json");
    std::fs::write(&file, r#"{"p":3,"n":3,"l":-10,"N":10,"coeffs":[]}"#).unwrap();
    let out = padic(&["fn", "info", "--in", &file]);
    assert!(
        stderr(&out).starts_with("error[grid-too-large]:"),
        "{}",
        stderr(&out)
    );
    let out = padic(&["fn", "info", "--in", &path(dir.path(), "missing.json")]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn json_reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let phi = write_fn(
        dir.path(),
        "phi.json",
        &[
            "lizorkin", "--p", "3", "--l", "-2", "--big-n", "1", "--seed", "3",
        ],
    );
    let args = [
        "--json",
        "taub",
        "th8",
        "--dist",
        "pi_alpha:alpha=0.6;pi1=1",
        "--rho",
        "power:alpha=0.6;pi1=1",
        "--beta",
        "-1",
        "--in",
        &phi,
    ];
    let first = padic(&args);
    assert!(first.status.success(), "{}", stderr(&first));
    for threads in ["1", "4"] {
        let again = Command::new(env!("CARGO_BIN_EXE_padic"))
            .args(args)
            .env("PADIC_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(first.stdout, again.stdout);
    }
    let bad = Command::new(env!("CARGO_BIN_EXE_padic"))
        .args(["gamma", "--p", "2", "--alpha", "1"])
        .env("PADIC_THREADS", "zero")
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&bad.stderr).starts_with("error[parse]:"));
}

#[test]
fn tauberian_subcommands_report_tables() {
    let dir = tempfile::tempdir().unwrap();
    let omega = write_fn(dir.path(), "omega.json", &["omega", "--p", "3"]);
    let out = padic(&[
        "--json",
        "taub",
        "quasi-limit",
        "--dist",
        "delta",
        "--rho",
        "power:alpha=0",
        "--in",
        &omega,
    ]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 8);
    assert_eq!(v["stabilized"], true);
    let out = padic(&[
        "taub",
        "th9",
        "--p",
        "2",
        "--dist",
        "pi_alpha:alpha=0.5",
        "--rho",
        "power:alpha=0.5",
        "--big-n",
        "2",
        "--tol",
        "1e-8",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let phi = write_fn(
        dir.path(),
        "phi.json",
        &["lizorkin", "--p", "3", "--l", "-2", "--big-n", "1"],
    );
    let out = padic(&[
        "taub",
        "th10",
        "--dist",
        "pi_alpha:alpha=0.6",
        "--rho",
        "power:alpha=0.6",
        "--symbol",
        "taibleson:alpha=0.8",
        "--degree",
        "0.8",
        "--in",
        &phi,
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let out = padic(&[
        "taub",
        "th10",
        "--dist",
        "delta",
        "--rho",
        "power:alpha=0",
        "--symbol",
        "taibleson:alpha=0.8",
        "--degree",
        "0.5",
        "--in",
        &phi,
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error[symbol]:"));
    let phi2 = write_fn(
        dir.path(),
        "phi2.json",
        &["lizorkin", "--p", "2", "--n", "2", "--kind", "first"],
    );
    let out = padic(&[
        "taub",
        "th7",
        "--dist",
        "multi_riesz:alphas=0.5,1.5",
        "--rho",
        "power:alpha=1",
        "--beta",
        "-1,0.5",
        "--in",
        &phi2,
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
}

#[test]
fn pair_and_eval() {
    let dir = tempfile::tempdir().unwrap();
    let omega = write_fn(dir.path(), "omega.json", &["omega", "--p", "5"]);
    let out = padic(&["pair", "--dist", "delta", "--in", &omega]);
    assert_eq!(stdout(&out).trim(), "<delta, phi> = 1.000000000000000");
    let out = padic(&["fn", "eval", "--in", &omega, "--x", "5/25"]);
    assert!(stdout(&out).trim().ends_with(") = 0.000000000000000"));
    let coset = write_fn(
        dir.path(),
        "coset.json",
        &["coset", "--p", "5", "--center", "1/5", "--k", "-1"],
    );
    let out = padic(&[
        "--precision",
        "3",
        "fn",
        "eval",
        "--in",
        &coset,
        "--x",
        "6/5",
    ]);
    assert!(stdout(&out).trim().ends_with(") = 0.000"));
    let out = padic(&[
        "--precision",
        "3",
        "fn",
        "eval",
        "--in",
        &coset,
        "--x",
        "26/5",
    ]);
    assert!(stdout(&out).trim().ends_with(") = 1.000"));
}
