use valfield::gallery::*;
use valfield::Error;

fn params() -> Params {
    Params::default()
}

fn run(name: &str, p: Params) -> Report {
    let r = run_scenario(name, &p).unwrap();
    if !r.pass {
        panic!("{}", render_text(&r));
    }
    r
}

#[test]
fn every_scenario_passes_with_defaults() {
    let names: Vec<String> = list_scenarios().iter().map(|s| s.name.to_string()).collect();
    for (name, r) in names.iter().zip(run_many(&names, &params(), false)) {
        let r = r.unwrap();
        assert!(r.pass, "{name}\n{}", render_text(&r));
        assert!(r.claims.iter().all(|c| c.exact_match == (c.status == ClaimStatus::Exact)));
    }
}

#[test]
fn catalog() {
    let cat = list_scenarios();
    assert_eq!(cat.len(), 9);
    let names: Vec<_> = cat.iter().map(|s| s.name).collect();
    assert_eq!(names, ["G1", "G2", "G3", "G4", "G5", "G6", "G7", "G8", "G9"]);
    assert!(cat.iter().all(|s| !s.reference.is_empty()));
    let g3 = &cat[2];
    assert!(g3.params.iter().any(|p| p.name == "s" && p.constraint.contains("gcd(n, p) = 1")));
    assert_eq!(canonical_name("defecttower").unwrap(), "G2");
    assert!(matches!(canonical_name("G10"), Err(Error::UnknownScenario(_))));
}

#[test]
fn defect_tower_claims_and_bookkeeping() {
    let r = run("G2", Params { p: Some(2), k_max: Some(3), ..params() });
    for k in 1..=3 {
        let c = r.claims.iter().find(|c| c.description == format!("θ_{k}^p − θ_{k} − t^(−1) = −t^(−1/p^{k})")).unwrap();
        assert!(c.exact_match);
        let v = r.claims.iter().find(|c| c.description == format!("v(θ − θ_{k}) = −1/p^{}", k + 1)).unwrap();
        assert_eq!(v.lhs, format!("-1/{}", 1 << (k + 1)));
    }
    assert_eq!(r.ramification.len(), 3);
    for row in &r.ramification {
        assert_eq!((row.n, row.e, row.f, row.d), (2, 2, 1, 1));
    }
}

#[test]
fn z_series_values() {
    let r = run("G5", Params { p: Some(2), k_max: Some(2), ..params() });
    assert_eq!(r.claims.iter().map(|c| c.lhs.as_str()).collect::<Vec<_>>(), ["1/4", "1/8"]);
}

#[test]
fn bad_value_group_recovers_fourth_root() {
    let r = run("G3", Params { p: Some(3), s: Some(vec![2, 4, 5]), ..params() });
    let c = r.claims.iter().find(|c| c.description.starts_with("(t^(1/4))^4 = t")).unwrap();
    assert!(c.exact_match);
    assert!(c.lhs.starts_with("t^(1)"));
}

#[test]
fn invalid_parameters_are_rejected() {
    let bad = |name: &str, p: Params| matches!(run_scenario(name, &p), Err(Error::InvalidParams(_)));
    assert!(bad("G2", Params { p: Some(4), ..params() }));
    assert!(bad("G2", Params { k_max: Some(0), ..params() }));
    assert!(bad("G3", Params { s: Some(vec![2, 3]), ..params() }));
    assert!(bad("G4", Params { k_max: Some(7), ..params() }));
    assert!(bad("G6", Params { p: Some(3), field_size: Some(9), ..params() }));
    assert!(bad("G1", Params { precision: Some("-1".into()), ..params() }));
}

#[test]
fn reports_are_deterministic() {
    for name in ["G2", "G8"] {
        let a = render_json(&run_scenario(name, &params()).unwrap());
        let b = render_json(&run_scenario(name, &params()).unwrap());
        assert_eq!(a, b);
    }
}

#[test]
fn json_round_trips() {
    let r = run("G1", params());
    let back: Report = serde_json::from_str(&render_json(&r)).unwrap();
    assert_eq!(back, r);
    let v: serde_json::Value = serde_json::from_str(&render_json(&r)).unwrap();
    for key in ["scenario", "params", "claims", "pass", "elapsed_ms"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert!(v["elapsed_ms"].is_null());
}

#[test]
fn text_rendering() {
    let r = run("G1", params());
    let text = render_text(&r);
    let row = text.lines().find(|l| l.contains("a^p − a − t ≡ 0 (mod t^N)")).unwrap();
    assert!(row.starts_with('✓'));
    assert!(text.ends_with("PASS\n"));

    let mut failing = r.clone();
    failing.claims[0] = Claim::equal("1 = 2", 1, 2);
    failing.pass = false;
    let text = render_text(&failing);
    let row = text.lines().find(|l| l.contains("1 = 2")).unwrap();
    assert!(row.starts_with('✗'));
    assert!(row.trim_end().ends_with('2'));
    assert!(text.ends_with("FAIL\n"));
}

#[test]
fn ramification_rows_need_prime_power_defect() {
    assert_eq!(RamificationRow::new(1, 3, 9, 1, 1).unwrap().d, 9);
    assert!(RamificationRow::new(1, 3, 6, 1, 1).is_err());
    assert!(RamificationRow::new(1, 2, 3, 2, 1).is_err());
}
