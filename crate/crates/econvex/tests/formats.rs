use econvex::catalog;
use econvex::problem::{Kind, ProblemFile};
use econvex::CliError;
use econvex_core::audit::{run_suite, Suite};
use econvex_core::catalog as core_catalog;
use econvex_core::duality::TAU;
use econvex_core::funcrep::GridLike;
use econvex_core::scalar::{q, rv};
use econvex_core::{ExtReal, Rational};

const SMALL: &str = r#"{
  "name": "small",
  "x_dim": 1,
  "y_dim": 1,
  "phi": {"table": [["0", "1", "inf"], ["-1/2", "2", "3"]]},
  "grids": {
    "x": {"points": ["0", "1"]},
    "y": {"range": {"lo": "-1", "hi": "1", "step": "1"}},
    "ystar": ["0", "1"],
    "vstar": ["0"],
    "alpha": ["1"],
    "xstar": ["0"],
    "ustar": ["0"]
  }
}"#;

fn schema_message(text: &str) -> String {
    match ProblemFile::from_json(text) {
        Err(CliError::Schema(m)) => m,
        other => panic!("expected a schema error, got {other:?}"),
    }
}

#[test]
fn catalog_files_build_the_core_instances() {
    for inst in core_catalog::instances::<Rational>() {
        let built = catalog::load(inst.name).unwrap().instance::<Rational>().unwrap();
        assert_eq!(built.phi, inst.phi, "{}", inst.name);
        assert_eq!(built.x_grid, inst.x_grid, "{}", inst.name);
        assert_eq!(built.y_grid, inst.y_grid, "{}", inst.name);
        assert_eq!(built.dual_y, inst.dual_y, "{}", inst.name);
        assert_eq!(built.xu_pairs, inst.xu_pairs, "{}", inst.name);
    }
    let set = catalog::load("open_epigraph_eset").unwrap();
    assert_eq!(set.kind, Kind::Eset);
    assert_eq!(set.eset().unwrap(), core_catalog::open_epigraph::<Rational>());
}

#[test]
fn catalog_names_match_the_core_list() {
    let names: Vec<&str> = catalog::FILES.iter().map(|(n, _)| *n).collect();
    assert_eq!(names, core_catalog::NAMES);
    for (n, text) in catalog::FILES {
        assert_eq!(ProblemFile::from_json(text).unwrap().name, n);
    }
}

#[test]
fn round_trip_preserves_grids_and_audits() {
    for (name, _) in catalog::FILES {
        let f = catalog::load(name).unwrap();
        let again = ProblemFile::from_json(&f.to_json()).unwrap();
        assert_eq!(again, f);
        if f.kind == Kind::Eset {
            continue;
        }
        let (a, b) = (f.instance::<Rational>().unwrap(), again.instance::<Rational>().unwrap());
        assert_eq!(a.x_grid, b.x_grid);
        assert_eq!(a.dual_y, b.dual_y);
        let ra = run_suite(&a.problem().unwrap(), Suite::All, TAU).unwrap();
        let rb = run_suite(&b.problem().unwrap(), Suite::All, TAU).unwrap();
        assert_eq!(ra, rb, "{name}");
    }
}

#[test]
fn instances_write_back_to_equal_files() {
    for inst in core_catalog::instances::<Rational>() {
        let f = ProblemFile::of_instance(&inst).unwrap();
        let built = ProblemFile::from_json(&f.to_json()).unwrap().instance::<Rational>().unwrap();
        assert_eq!(built.phi, inst.phi);
        assert_eq!(built.dual_y, inst.dual_y);
    }
}

#[test]
fn table_and_range_grids() {
    let f = ProblemFile::from_json(SMALL).unwrap();
    assert_eq!(f.tolerance, TAU);
    let b = f.instance::<Rational>().unwrap();
    assert_eq!(b.y_grid.points(), &[rv(&[-1]), rv(&[0]), rv(&[1])]);
    let p = b.problem().unwrap();
    assert_eq!(p.table().at(0, 2), &ExtReal::PosInf);
    assert_eq!(p.table().at(1, 0), &ExtReal::Finite(q(-1, 2)));
    let fl = f.instance::<f64>().unwrap();
    assert_eq!(fl.problem().unwrap().table().at(1, 0), &ExtReal::Finite(-0.5));
}

#[test]
fn integers_are_accepted_and_written_as_strings() {
    let text = SMALL.replace(r#""alpha": ["1"]"#, r#""alpha": [1, "2"]"#);
    let f = ProblemFile::from_json(&text).unwrap();
    assert_eq!(f.instance::<Rational>().unwrap().dual_y.len(), 4);
    let out = f.to_json();
    assert!(out.contains(r#""1""#) && !out.contains("[1,"), "{out}");
}

#[test]
fn unknown_keys_are_rejected_with_name_and_line() {
    let text = SMALL.replace(r#""name": "small","#, "\"name\": \"small\",\n  \"colour\": \"red\",");
    let m = schema_message(&text);
    assert!(m.contains("colour") && m.contains("line 3"), "{m}");

    let text = SMALL.replace(r#""step": "1""#, r#""step": "1", "count": "3""#);
    let m = schema_message(&text);
    assert!(m.contains("count") && m.contains("line"), "{m}");
}

#[test]
fn bad_literals_and_missing_fields() {
    let bad = ProblemFile::from_json(&SMALL.replace(r#""ystar": ["0", "1"]"#, r#""ystar": ["0", "one"]"#)).unwrap();
    match bad.instance::<Rational>() {
        Err(CliError::Schema(m)) => assert!(m.contains("grids.ystar") && m.contains("one"), "{m}"),
        other => panic!("{other:?}"),
    }
    let m = schema_message(&SMALL.replace(r#""x_dim": 1,"#, ""));
    assert!(m.contains("x_dim"), "{m}");
    let m = schema_message(r#"{"name": "e", "kind": "eset"}"#);
    assert!(m.contains("set"), "{m}");
}

#[test]
fn missing_origin_names_the_invariant() {
    let text = SMALL.replace(r#"{"range": {"lo": "-1", "hi": "1", "step": "1"}}"#, r#"{"points": ["1", "2", "3"]}"#);
    match ProblemFile::from_json(&text).unwrap().instance::<Rational>() {
        Err(CliError::Invalid(m)) => assert!(m.contains("origin"), "{m}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn zero_alpha_loads_but_cannot_build_a_problem() {
    let text = SMALL.replace(r#""alpha": ["1"]"#, r#""alpha": ["0", "1"]"#);
    let b = ProblemFile::from_json(&text).unwrap().instance::<Rational>().unwrap();
    assert!(b.w_grid().is_ok());
    assert!(matches!(b.problem(), Err(CliError::Invalid(m)) if m.contains("alpha")));
}

#[test]
fn dimension_mismatches() {
    let text = SMALL.replace(r#""ystar": ["0", "1"]"#, r#""ystar": [["0", "1"]]"#);
    match ProblemFile::from_json(&text).unwrap().instance::<Rational>() {
        Err(CliError::Invalid(m)) => assert!(m.contains("grids.ystar") && m.contains("dimension"), "{m}"),
        other => panic!("{other:?}"),
    }
    let text = SMALL.replace(r#"["-1/2", "2", "3"]"#, r#"["-1/2", "2"]"#);
    match ProblemFile::from_json(&text).unwrap().instance::<Rational>() {
        Err(CliError::Invalid(m)) => assert!(m.contains("row 1"), "{m}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn expression_blocks_parse() {
    let text = r#"{
      "name": "pw",
      "x_dim": 1,
      "y_dim": 1,
      "phi": {"expr": {"op": "sum", "terms": [
        {"op": "compose", "rows": [["1", "0"]], "offset": ["0"], "inner": {"op": "pw1", "pieces": [
          {"lo": "unbounded", "hi": {"open": "0"}, "value": "pos_inf"},
          {"lo": {"closed": "0"}, "hi": "unbounded", "value": {"affine": {"slope": "2", "intercept": "-1"}}}
        ]}},
        {"op": "abs", "arg": {"op": "affine", "coeffs": ["0", "1"], "constant": "0"}}
      ]}},
      "grids": {"x": {"points": ["-1", "0", "3"]}, "y": {"points": ["0", "2"]},
                "ystar": ["0"], "vstar": ["0"], "alpha": ["1"]}
    }"#;
    let f = ProblemFile::from_json(text).unwrap();
    let p = f.instance::<Rational>().unwrap().problem().unwrap();
    assert_eq!(p.table().row(0), &[ExtReal::PosInf, ExtReal::PosInf]);
    assert_eq!(p.table().row(2), &[ExtReal::from_i64(5), ExtReal::from_i64(7)]);
    let back = ProblemFile::from_json(&f.to_json()).unwrap();
    assert_eq!(back.instance::<Rational>().unwrap().phi, f.instance::<Rational>().unwrap().phi);
}
