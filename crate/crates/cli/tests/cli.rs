use std::process::{Command, Output};

fn valfield(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_valfield"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn eval_composite_place() {
    let o = valfield(&["eval", "--place", "tests/fixtures/lex2.json", "x1^3/x2^2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "v = (3,-2), residue = 0");

    let o = valfield(&["eval", "--place", "tests/fixtures/lex2.json", "x1/x1 + x2"]);
    assert_eq!(stdout(&o).trim(), "v = (0,0), residue = 1");
}

#[test]
fn eval_other_places() {
    let o = valfield(&["eval", "--place", "tests/fixtures/quad.json", "x1 + x2"]);
    assert_eq!(stdout(&o).trim(), "v = 1+0*sqrt2, residue = 0");
    let o = valfield(&["--json", "eval", "--place", "tests/fixtures/theta.json", "x1^2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"], "-1");
    assert_eq!(v["residue"], "inf");
}

#[test]
fn gallery_json_report() {
    let o = valfield(&["gallery", "G2", "--p", "2", "--k-max", "3", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["scenario"], "G2");
    assert_eq!(v["pass"], true);
    assert!(v["elapsed_ms"].is_null());
    assert_eq!(v["params"]["k_max"], 3);
    assert!(v["claims"].as_array().unwrap().iter().all(|c| c["exact_match"] == true));
}

#[test]
fn gallery_text_table() {
    let o = valfield(&["gallery", "G1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let row = out.lines().find(|l| l.contains("a^p − a − t ≡ 0 (mod t^N)")).unwrap();
    assert!(row.starts_with('✓'));
    assert!(out.trim_end().ends_with("PASS"));
}

#[test]
fn output_is_deterministic() {
    let args = ["gallery", "G8", "--seed", "7", "--json"];
    assert_eq!(valfield(&args).stdout, valfield(&args).stdout);
    let all = valfield(&["gallery"]);
    assert_eq!(all.status.code(), Some(0));
    assert_eq!(all.stdout, valfield(&["gallery", "all"]).stdout);
}

#[test]
fn perron_basis_and_coefficients() {
    let o = valfield(&["perron", "--group", "quad", "1", "sqrt2-1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("basis: "));
    let o = valfield(&["--json", "perron", "--group", "quad", "1", "sqrt2-1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["coeffs"], serde_json::json!([[1, 0], [0, 1]]));
    let o = valfield(&["perron", "--group", "quad", "1", "1-sqrt2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("NotPositive"));
}

#[test]
fn lift_and_artin_schreier() {
    let o = valfield(&["--json", "lift", "--field", "F3", "--start", "0", "--precision", "9", "X^3 - X - t"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"], "2*t^(1) + 2*t^(3) + O(t^(9))");
    assert_eq!(v["steps"], serde_json::json!(["1", "3", ">= 9"]));

    let o = valfield(&["as", "--p", "2", "--c", "t^(-1)", "--max-iter", "3"]);
    let out = stdout(&o);
    assert!(out.contains("DefectSuspect"));
    assert!(out.contains("t^(-1/2) + t^(-1/4) + t^(-1/8)"));
    let o = valfield(&["--json", "as", "--p", "3", "--c", "1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["outcome"], "NoResidueRoot");
    assert_eq!(v["trace"], "1");
}

#[test]
fn errors_are_structured() {
    let cases: [&[&str]; 5] = [
        &["gallery", "G10"],
        &["eval", "--place", "tests/fixtures/lex2.json", "x1 +* x2"],
        &["gallery", "G1", "--precision", "1/2"],
        &["eval", "--place", "tests/fixtures/bad.json", "x1"],
        &["eval", "--place", "tests/fixtures/missing.json", "x1"],
    ];
    for args in cases {
        let o = valfield(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr(&o).starts_with("error["), "{args:?}: {}", stderr(&o));
        assert!(o.stdout.is_empty());
    }
    let o = valfield(&["--json", "gallery", "nope"]);
    let v: serde_json::Value = serde_json::from_str(&stderr(&o)).unwrap();
    assert_eq!(v["error"], "UnknownScenario");
    assert_eq!(valfield(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn claim_failure_exits_one() {
    // v(θ − θ_39) needs a term beyond the depth cap of the stream: indeterminate
    let o = valfield(&["gallery", "G2", "--k-max", "39"]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(stdout(&o).contains('✗'));
}

#[test]
fn list_catalog() {
    let o = valfield(&["--json", "list"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 9);
}
