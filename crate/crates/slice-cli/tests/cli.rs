use std::process::{Command, Output};

fn slice(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slice")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn describe_reports_case_iii() {
    let o = slice(&["describe", "--l", "3", "--lprime", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("class (l=3, l'=3) case iii"), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("a(")).count(), 6);
}

#[test]
fn describe_json_has_every_root() {
    let o = slice(&["describe", "--l", "5", "--lprime", "3", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["schema"], "slice-describe/1");
    assert_eq!(doc["case"], "iii");
    assert!(doc["roots"].as_array().unwrap().iter().all(|r| r["root"].as_str().unwrap().starts_with("a(")));
}

#[test]
fn invariants_json_lists_three_generators() {
    let o = slice(&["invariants", "--l", "3", "--lprime", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["schema"], "slice-invariants/1");
    let gens = doc["generators"].as_array().unwrap();
    assert_eq!(gens.len(), 3);
    for g in gens {
        let poly = slice_core::exactring::parse_poly_json(&g["poly"].to_string()).unwrap();
        assert_eq!(poly.num_terms() as u64, g["terms"].as_u64().unwrap());
        assert_eq!(poly.total_degree() as i64, g["degree"].as_i64().unwrap());
    }
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["invariants", "--l", "5", "--lprime", "4"][..],
        &["describe", "--l", "6", "--lprime", "5", "--format", "json"][..],
        &["verify", "--suite", "prop58", "--l-max", "3", "--trials", "2", "--format", "json", "--no-timings"][..],
    ] {
        assert_eq!(slice(args).stdout, slice(args).stdout, "{args:?}");
    }
}

#[test]
fn bad_point_is_a_usage_error() {
    for args in [
        &["describe", "--l", "3", "--lprime", "4"][..],
        &["invariants", "--l", "0", "--lprime", "0"][..],
        &["describe", "--l", "3"][..],
        &["describe", "--l", "3", "--lprime", "1", "--colour"][..],
        &["verify", "--suite", "everything"][..],
        &["verify", "--l-min", "5", "--l-max", "2"][..],
    ] {
        let o = slice(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn passing_suite_exits_zero() {
    let o = slice(&["verify", "--suite", "invariance", "--l-max", "3", "--trials", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains(" 0 fail"));
}

#[test]
fn refuted_statements_exit_one() {
    let o = slice(&["verify", "--suite", "lemmas", "--l-max", "4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let fails: Vec<&str> = doc["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|v| v["status"] == "fail")
        .map(|v| v["check_id"].as_str().unwrap())
        .collect();
    assert!(fails.contains(&"lemma-layer-difference-orbits"));
    assert!(doc["timings"].as_array().unwrap().len() >= 3);
}
