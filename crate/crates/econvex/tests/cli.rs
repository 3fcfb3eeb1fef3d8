use std::path::PathBuf;
use std::process::{Command, Output};

use econvex::catalog;

fn econvex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_econvex")).args(args).env_remove("ECONVEX_THREADS").output().expect("binary runs")
}

fn with_threads(n: &str, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_econvex")).args(args).env("ECONVEX_THREADS", n).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn temp_file(name: &str, text: &str) -> PathBuf {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, text).unwrap();
    p
}

const ALPHA_ZERO: &str = r#"{
  "name": "alpha_zero",
  "x_dim": 1,
  "y_dim": 1,
  "phi": {"expr": {"op": "abs", "arg": {"op": "affine", "coeffs": ["1", "0"], "constant": "0"}}},
  "grids": {
    "x": {"range": {"lo": "-2", "hi": "2", "step": "1/2"}},
    "y": {"points": ["0"]},
    "ystar": ["0"],
    "vstar": ["0"],
    "alpha": ["0", "1"],
    "xstar": ["-1", "1"],
    "ustar": ["0", "1"]
  }
}"#;

#[test]
fn exact_suite_passes_on_every_catalog_entry() {
    for (name, _) in catalog::FILES {
        let o = econvex(&["audit", &format!("catalog:{name}"), "--suite", "exact"]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
        assert!(stdout(&o).contains("exact_failures = 0"), "{name}");
    }
}

#[test]
fn full_suite_exits_zero_despite_conditional_findings() {
    let o = econvex(&["audit", "catalog:truncated_dual", "--suite", "all"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("restriction_equality.status = surrogate-unmet"), "{out}");
    let o = econvex(&["audit", "catalog:open_epigraph_eset", "--output", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("functionally_representable,conditional,fail,x = 0"));
}

#[test]
fn duality_on_fenchel_abs_reports_zero_gap() {
    let o = econvex(&["duality", "catalog:fenchel_abs"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("\ngap = 0\n") && out.contains("zero_gap = true"), "{out}");
}

#[test]
fn subdifferential_of_abs_at_zero_contains_the_trivial_point() {
    let o = econvex(&["subdiff", "catalog:fenchel_abs", "--at", "0", "--eps", "0", "--output", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("xstar,ustar,alpha\n"));
    assert!(out.lines().any(|l| l == "0,0,1"), "{out}");
    let o = econvex(&["subdiff", "catalog:fenchel_abs", "--at", "-2", "--eps", "1/2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("definitional_agrees = true"));
}

#[test]
fn lagrangian_csv_and_saddles() {
    let o = econvex(&["lagrangian", "catalog:fenchel_abs"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("supinf = 0") && out.contains("infsup = 0") && out.contains("equivalence = true"), "{out}");
    let o = econvex(&["--output", "csv", "lagrangian", "catalog:example52"]);
    let out = stdout(&o);
    assert!(out.starts_with("x,ystar,vstar,alpha,value\n"));
    assert_eq!(out.lines().count(), 1 + 11 * 12);
    assert!(out.lines().any(|l| l == "0,0,0,1,0"), "{out}");
}

#[test]
fn conjugate_and_biconjugate_tables() {
    let o = econvex(&["conjugate", "catalog:affine_recovery", "--output", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("xstar,ustar,alpha,value\n"));
    assert!(out.lines().any(|l| l == "0,0,1,3"), "{out}");
    assert!(out.lines().any(|l| l == "1,0,1,0"), "{out}");
    let o = econvex(&["biconjugate", "catalog:two_point_nonconvex"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("hull_below_f = true"));
}

#[test]
fn zero_alpha_is_an_input_error_for_duality_only() {
    let p = temp_file("alpha_zero.json", ALPHA_ZERO);
    let path = p.to_str().unwrap();
    let o = econvex(&["duality", path]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("alpha"), "{}", stderr(&o));
    let o = econvex(&["conjugate", path, "--output", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l == "1,1,0,inf"), "{out}");
    assert!(out.lines().any(|l| l == "1,0,0,inf"), "{out}");
}

#[test]
fn missing_origin_and_bad_schema_exit_three() {
    let text = ALPHA_ZERO.replace(r#""y": {"points": ["0"]}"#, r#""y": {"points": ["1"]}"#);
    let o = econvex(&["conjugate", temp_file("no_origin.json", &text).to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("origin"));
    let text = ALPHA_ZERO.replace(r#""name": "alpha_zero","#, r#""name": "x", "nmae": "y","#);
    let o = econvex(&["conjugate", temp_file("typo.json", &text).to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("nmae") && stderr(&o).contains("line 2"), "{}", stderr(&o));
    let o = econvex(&["duality", "/nonexistent/problem.json"]);
    assert_eq!(o.status.code(), Some(3));
    let o = econvex(&["duality", "catalog:nope"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("example52"));
}

#[test]
fn usage_errors_exit_three_and_help_exits_zero() {
    assert_eq!(econvex(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(econvex(&["duality", "catalog:example52", "--bogus"]).status.code(), Some(3));
    assert_eq!(econvex(&["subdiff", "catalog:example52"]).status.code(), Some(3));
    assert_eq!(econvex(&["subdiff", "catalog:example52", "--at", "0", "--eps", "-1"]).status.code(), Some(3));
    assert_eq!(econvex(&["subdiff", "catalog:example52", "--at", "1/3"]).status.code(), Some(3));
    assert_eq!(econvex(&["eset", "catalog:example52"]).status.code(), Some(3));
    assert_eq!(econvex(&["duality", "catalog:open_epigraph_eset"]).status.code(), Some(3));
    let h = econvex(&["--help"]);
    assert_eq!(h.status.code(), Some(0));
    assert!(stdout(&h).contains("lagrangian"));
    assert_eq!(econvex(&["--version"]).status.code(), Some(0));
    assert_eq!(with_threads("zero", &["catalog"]).status.code(), Some(3));
}

#[test]
fn outputs_are_identical_across_thread_counts() {
    for args in [
        vec!["audit", "catalog:example52", "--suite", "all"],
        vec!["lagrangian", "catalog:truncated_dual", "--output", "csv"],
        vec!["duality", "catalog:two_point_nonconvex"],
    ] {
        let a = with_threads("1", &args);
        let b = with_threads("4", &args);
        let c = econvex(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.stdout, c.stdout, "{args:?}");
        assert_eq!(a.stderr, b.stderr, "{args:?}");
    }
}

#[test]
fn boundary_coincidences_are_warned_on_stderr() {
    let o = econvex(&["duality", "catalog:example52"]);
    let err = stderr(&o);
    assert!(err.starts_with("warning: ") && err.contains("<x, u*> = alpha"), "{err}");
    assert!(!stdout(&o).contains("warning"));
}

#[test]
fn eset_command_reports_representability_and_certificates() {
    let o = econvex(&["eset", "catalog:open_epigraph_eset", "--point", "0,0", "--point", "-1,3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("functionally_representable = false") && out.contains("representability_witness = x = 0"), "{out}");
    let o = econvex(&["eset", "catalog:open_epigraph_eset", "--point", "0,0", "--output", "csv"]);
    assert_eq!(stdout(&o), "x1,x2,member,a1,a2,certified\n0,0,false,1,-1,true\n");
}

#[test]
fn catalog_listing_and_printing() {
    let o = econvex(&["catalog", "--output", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 7);
    assert!(out.contains("open_epigraph_eset,eset,"));
    let o = econvex(&["catalog", "example52"]);
    assert_eq!(stdout(&o), catalog::text("example52").unwrap());
}

#[test]
fn float_backend_runs() {
    let text = catalog::text("fenchel_abs").unwrap().replace(r#""backend": "rational""#, r#""backend": "float""#);
    let p = temp_file("fenchel_float.json", &text);
    let o = econvex(&["duality", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("backend = float") && stdout(&o).contains("zero_gap = true"));
    let o = econvex(&["audit", p.to_str().unwrap(), "--suite", "exact"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}
