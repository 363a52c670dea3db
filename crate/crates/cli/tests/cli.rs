use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::NamedTempFile;
use tricontract::json::{parse_matrix, Record};

const ZERO4: &str = r#"{"omega":[[0,0],[0,0],[0,0],[0,0]],"alpha":[[0,0],[0,0],[0,0]],"beta":[[0,0],[0,0]],"gamma":[0,0]}"#;

fn file(contents: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tricontract"))
        .args(args)
        .output()
        .unwrap()
}

fn run_on(args: &[&str], contents: &str) -> Output {
    let f = file(contents);
    let mut all = args.to_vec();
    all.push(f.path().to_str().unwrap());
    run(&all)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json_out(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn check_zero_matrix() {
    let o = run_on(&["check"], ZERO4);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("branch Main"));
    let o = run_on(&["--json", "check"], ZERO4);
    let v = json_out(&o);
    assert_eq!(v["verdict"]["branch"], "Main");
    assert_eq!(v["agree"], true);
}

#[test]
fn check_large_corner() {
    let text = ZERO4.replace(r#""gamma":[0,0]"#, r#""gamma":[1.5,0]"#);
    let o = run_on(&["--json", "check"], &text);
    assert_eq!(o.status.code(), Some(1));
    let v = json_out(&o);
    let r = v["verdict"]["residuals"]["gamma_bound"].as_f64().unwrap();
    assert!((r + 1.25).abs() < 1e-15);
    assert_eq!(v["oracle"]["is_contraction"], false);
}

#[test]
fn check_three_by_three() {
    let text = r#"{"omega":[[0,0],[0,0],[0,0]],"alpha":[[0.8,0],[0.8,0]],"beta":[0.36,0]}"#;
    assert_eq!(run_on(&["check", "--size", "3"], text).status.code(), Some(0));
    let text = text.replace("[0.36,0]", "[0.37,0]");
    assert_eq!(run_on(&["check"], &text).status.code(), Some(1));
    assert_eq!(run_on(&["check", "--size", "4"], &text).status.code(), Some(2));
}

#[test]
fn check_errors_name_the_field() {
    let o = run_on(&["check"], "{");
    assert_eq!(o.status.code(), Some(2));
    let short = ZERO4.replace(r#""beta":[[0,0],[0,0]]"#, r#""beta":[[0,0]]"#);
    let o = run_on(&["check"], &short);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`beta`"), "{}", stderr(&o));
    let huge = ZERO4.replace(r#""gamma":[0,0]"#, r#""gamma":[0,1e999]"#);
    let o = run_on(&["check"], &huge);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`gamma`"), "{}", stderr(&o));
}

#[test]
fn malformed_inputs_never_panic() {
    for text in ["", "null", "[]", "{}", r#"{"omega":"x"}"#, r#"{"omega":[1,2,3,4]}"#, "\u{0}\u{1}"] {
        for cmd in [&["check"][..], &["disk"], &["norm"], &["mobius", "0.1,0"]] {
            let o = run_on(cmd, text);
            assert_eq!(o.status.code(), Some(2), "{cmd:?} on {text:?}");
            assert!(!stderr(&o).contains("panicked"));
        }
    }
    let o = run(&["check", "/nonexistent/file.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn disk_examples() {
    let no_corner = ZERO4.replace(r#","gamma":[0,0]"#, "");
    let v = json_out(&run_on(&["--json", "disk"], &no_corner));
    assert_eq!(v["disk"]["radius"], 1.0);
    assert_eq!(v["disk"]["center"], serde_json::json!([0.0, 0.0]));

    let text = no_corner.replacen("[[0,0],[0,0],[0,0],[0,0]]", "[[0.5,0],[0,0],[0,0],[0.5,0]]", 1);
    let o = run_on(&["disk"], &text);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("radius 0.75"), "{}", stdout(&o));

    let text = no_corner.replacen("[[0,0],[0,0],[0,0]]", "[[1.1,0],[0,0],[0,0]]", 1);
    let o = run_on(&["disk"], &text);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("EMPTY") && stdout(&o).contains("alpha1_bound"));
}

#[test]
fn disk_cross_check() {
    let text = r#"{"omega":[[0.2,0.1],[-0.3,0.2],[0.1,-0.4],[0.3,0.3]],"alpha":[[0.3,-0.2],[0.2,0.2],[-0.1,0.25]],"beta":[[0.1,0.05],[-0.2,0.1]]}"#;
    let o = run_on(&["--json", "disk", "--cross-check"], text);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(json_out(&o)["cross_check"]["consistent"], true);
    let three = r#"{"omega":[[0,0],[0,0],[0,0]],"alpha":[[0.8,0],[0.8,0]]}"#;
    let v = json_out(&run_on(&["--json", "disk"], three));
    assert!((v["disk"]["radius"].as_f64().unwrap() - 0.36).abs() < 1e-15);
}

#[test]
fn fuzz_uniform_ball_agrees_and_repeats() {
    let args = ["--json", "fuzz", "--trials", "1000", "--seed", "42", "--dist", "uniform-ball"];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0));
    let mut a = json_out(&a);
    let mut b = json_out(&run(&args));
    assert_eq!(a["disagreements"], serde_json::json!([]));
    assert_eq!(a["trials"], 1000);
    a.as_object_mut().unwrap().remove("elapsed");
    b.as_object_mut().unwrap().remove("elapsed");
    assert_eq!(a, b);
}

#[test]
fn fuzz_other_distributions() {
    for dist in ["unimodular-diagonal", "near-boundary"] {
        let o = run(&["--json", "fuzz", "--trials", "1000", "--seed", "7", "--dist", dist]);
        assert_eq!(o.status.code(), Some(0), "{dist}");
        let v = json_out(&o);
        let total = v["agreements"].as_u64().unwrap()
            + v["skipped_in_band"].as_u64().unwrap()
            + v["disagreements"].as_array().unwrap().len() as u64;
        assert_eq!(total, 1000);
    }
    assert_eq!(run(&["fuzz", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(run(&["fuzz", "--dist", "gaussian"]).status.code(), Some(2));
}

fn mobius_record(args: &[&str], contents: &str) -> Record {
    let o = run_on(args, contents);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let first = stdout(&o).lines().next().unwrap().to_string();
    parse_matrix(&first).unwrap()
}

#[test]
fn mobius_examples() {
    let text = r#"{"omega":[[0.1,0.2],[0.3,0],[0,-0.4],[0.2,0.2]],"alpha":[[0.1,0],[0.2,0.1],[0,0.3]],"beta":[[0.05,0],[0,0.1]],"gamma":[0.1,-0.1]}"#;
    let Record::Tri4(t) = parse_matrix(text).unwrap() else { unreachable!() };
    let Record::Tri4(neg) = mobius_record(&["mobius", "0,0"], text) else { unreachable!() };
    assert!(neg.to_dense().max_abs_diff(&t.to_dense().scale_real(-1.0)) < 1e-15);

    let Record::Tri4(m) = mobius_record(&["mobius", "0.5,0"], ZERO4) else { unreachable!() };
    assert!(m.omega.iter().all(|w| *w == tricontract::ComplexScalar::new(0.5, 0.0)));

    let o = run_on(&["--json", "mobius", "-0.3,0.4", "--dense"], text);
    assert_eq!(o.status.code(), Some(0));
    assert!(json_out(&o)["max_abs_diff"].as_f64().unwrap() < 1e-12);

    assert_eq!(run_on(&["mobius", "1,0"], text).status.code(), Some(2));
    assert_eq!(run_on(&["mobius", "0.5"], text).status.code(), Some(2));
}

#[test]
fn norm_examples() {
    let id = r#"{"dense":[[[1,0],[0,0]],[[0,0],[1,0]]]}"#;
    assert_eq!(stdout(&run_on(&["norm"], id)).trim(), "1.000000000000000");
    assert_eq!(stdout(&run_on(&["norm"], ZERO4)).trim(), "0");
    let shift = ZERO4.replace(r#""alpha":[[0,0],[0,0],[0,0]]"#, r#""alpha":[[1,0],[1,0],[1,0]]"#);
    assert_eq!(stdout(&run_on(&["norm"], &shift)).trim(), "1.000000000000000");
    let ragged = r#"{"dense":[[[1,0]],[[0,0],[1,0]]]}"#;
    assert_eq!(run_on(&["norm"], ragged).status.code(), Some(2));
}

#[test]
fn tolerance_overrides_are_validated() {
    assert_eq!(run_on(&["--tol-psd", "0.5", "check"], ZERO4).status.code(), Some(2));
    assert_eq!(run_on(&["--tol-boundary", "1e-6", "check"], ZERO4).status.code(), Some(0));
}
