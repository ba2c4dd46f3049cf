use serde_json::Value;

use lowexp_web::{cube_roots, forge_explore, sweep_rates};

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn forge_explore_reports_split_verdict() {
    let v = parse(forge_explore(
        "install update 2.0",
        1024,
        160,
        7,
        "sha1-low",
        false,
    ));
    assert_eq!(v["flawed_accept"], true);
    assert_eq!(v["correct_accept"], false);
    assert_eq!(v["bound_satisfied"], true);
    let enc = v["encoded"].as_str().unwrap();
    let rec = v["recovered"].as_str().unwrap();
    assert_eq!(enc.len(), 256);
    assert_eq!(enc[216..], rec[216..], "low 160 bits must match");
    assert_ne!(enc, rec);
    assert!(v["z"].is_string());
}

#[test]
fn forge_explore_out_of_bound() {
    let v = parse(forge_explore("x", 512, 200, 1, "sha1-block", false));
    assert!(v["error"].as_str().unwrap().contains("bound"));
    let v = parse(forge_explore("x", 512, 200, 1, "sha1-block", true));
    assert_eq!(v["bound_satisfied"], false);
    assert!(v.get("error").is_none());
}

#[test]
fn bad_inputs_come_back_as_errors() {
    assert!(parse(forge_explore("x", 63, 160, 1, "sha1-low", false))["error"].is_string());
    assert!(parse(forge_explore("x", 512, 160, 1, "md5", false))["error"].is_string());
    assert!(parse(sweep_rates(512, 10, 5, 1, 1))["error"].is_string());
    assert!(parse(cube_roots(1, 30))["error"].is_string());
}

#[test]
fn sweep_rows_follow_the_bound() {
    let v = parse(sweep_rates(512, 160, 172, 20, 2));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 13);
    for r in rows.iter().filter(|r| r["bound_satisfied"] == true) {
        assert_eq!(r["accepts"], r["trials"]);
    }
}

#[test]
fn cube_roots_lists_enumeration() {
    let v = parse(cube_roots(3, 4));
    assert_eq!(v["roots"], serde_json::json!([11]));
    assert_eq!(v["inverse_root"], 11);
    let v = parse(cube_roots(0, 6));
    assert_eq!(v["roots"].as_array().unwrap().len(), 16);
    assert!(v["inverse_root"].is_null());
}
