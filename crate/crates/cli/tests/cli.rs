use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

// construct-even at n = 4: the star at 1 plus [2,4], in mask order
const EVEN_FOUR: &str = "n 4\n1\n1 2\n1 3\n1 2 3\n1 4\n1 2 4\n1 3 4\n2 3 4\n1 2 3 4\n";

fn ifam(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ifam")).args(args).output().expect("binary runs")
}

fn family_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn json_report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn profile_json() {
    let f = family_file(EVEN_FOUR);
    let out = ifam(&["profile", f.path().to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_report(&out);
    assert_eq!(v["tool"], "ifam");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["argv"][0], "profile");
    // one disjoint pair ({1}, {2,3,4}) among C(9,2) = 36
    assert_eq!(v["report"]["counts"][2], "35");
    assert_eq!(v["report"]["counts"][1], "9");
    assert!(v.get("wall_time_ms").is_none());
}

#[test]
fn profile_single_s() {
    let f = family_file(EVEN_FOUR);
    let out = ifam(&["profile", f.path().to_str().unwrap(), "--s", "2"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "c_2 = 35\n");
}

#[test]
fn exact_probability() {
    let f = family_file(EVEN_FOUR);
    // at p = 1/2 every subfamily is equally likely; 128 of the 512 contain the disjoint pair
    let out = ifam(&["prob", f.path().to_str().unwrap(), "--p", "1/2", "--json"]);
    assert_eq!(json_report(&out)["report"]["exact"], "3/4");
}

#[test]
fn monte_carlo_is_reproducible() {
    let f = family_file(EVEN_FOUR);
    let args = ["prob", f.path().to_str().unwrap(), "--p", "1/2", "--mc", "2000", "--seed", "9", "--json"];
    let a = ifam(&args);
    let b = ifam(&args);
    assert_eq!(a.stdout, b.stdout);
    let est = json_report(&a)["report"]["estimate"].as_f64().unwrap();
    assert!((est - 0.75).abs() < 0.06);
}

#[test]
fn compress_with_monotone_check() {
    let f = family_file("n 2\n2\n1 2\n");
    let out = ifam(&["compress", f.path().to_str().unwrap(), "--op", "ij:1,2", "--check-monotone", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_report(&out);
    assert_eq!(v["report"]["family"], "n 2\n1\n1 2\n");
    assert_eq!(v["report"]["monotone"]["falsified"], false);
}

#[test]
fn bad_descriptor_and_bad_file_exit_two() {
    let f = family_file("n 3\n1 4\n");
    assert_eq!(ifam(&["profile", f.path().to_str().unwrap()]).status.code(), Some(2));
    let g = family_file(EVEN_FOUR);
    assert_eq!(ifam(&["compress", g.path().to_str().unwrap(), "--op", "ij:1"]).status.code(), Some(2));
    assert_eq!(ifam(&["profile", "/nonexistent/family.txt"]).status.code(), Some(2));
}

#[test]
fn empty_set_needs_flag() {
    let f = family_file("n 2\n0x0\n1\n");
    let path = f.path().to_str().unwrap();
    assert_eq!(ifam(&["profile", path]).status.code(), Some(2));
    assert_eq!(ifam(&["profile", path, "--allow-empty"]).status.code(), Some(0));
}

#[test]
fn search_over_budget_exits_two() {
    let out = ifam(&["search", "--n", "99", "--N", "5", "--s", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("budget"));
}

#[test]
fn search_reports_unique_optimum() {
    let out = ifam(&["search", "--n", "4", "--N", "11", "--s", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json_report(&out)["report"];
    assert_eq!(r["optima"].as_array().unwrap().len(), 1);
    assert_eq!(r["scanned"], 1365);
}

#[test]
fn identical_argv_gives_identical_reports() {
    let args = ["search", "--n", "4", "--N", "10", "--s", "2,3", "--json"];
    assert_eq!(ifam(&args).stdout, ifam(&args).stdout);
}

#[test]
fn timing_is_opt_in() {
    let out = ifam(&["layer2", "--n", "5", "--bound", "--json", "--timing"]);
    assert!(json_report(&out)["wall_time_ms"].is_number());
}

#[test]
fn unknown_command_exits_two() {
    assert_eq!(ifam(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(ifam(&["verify", "--suite", "nope", "--n", "4"]).status.code(), Some(2));
}

#[test]
fn verify_t_unique_passes() {
    let out = ifam(&["verify", "--suite", "t-unique", "--n", "4", "--s", "2,5", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json_report(&out)["report"];
    assert_eq!(r["suite"], "t-unique");
    assert_eq!(r["overall"], "pass");
}

#[test]
fn construct_round_trips() {
    let out = ifam(&["construct", "--name", "construct-even", "--n", "4", "--N", "9"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), EVEN_FOUR);
    let out = ifam(&["construct", "--name", "construct-even", "--n", "4", "--N", "12"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn layer2_modes() {
    let out = ifam(&["layer2", "--n", "6", "--i", "4", "--kind", "star", "--json"]);
    // four edges at one vertex: C(4,2) intersecting edge pairs
    assert_eq!(json_report(&out)["report"]["p2"], 6);

    let csv = String::from_utf8(ifam(&["layer2", "--n", "4", "--crossover"]).stdout).unwrap();
    assert_eq!(csv.lines().next(), Some("i,p2_quasi_star,p2_quasi_complete,winner"));
    assert_eq!(csv.lines().count(), 1 + 7);

    let bound = String::from_utf8(ifam(&["layer2", "--n", "20", "--bound", "--to", "21"]).stdout).unwrap();
    assert!(bound.contains("\n20,") && bound.lines().nth(1).unwrap().ends_with(",false"));
    assert!(bound.lines().nth(2).unwrap().ends_with(",true"));

    let f = family_file("n 4\n1 2\n1 3\n2 3\n1 2 3 4\n");
    let out = ifam(&["layer2", "--n", "4", "--census", f.path().to_str().unwrap(), "--json"]);
    assert_eq!(json_report(&out)["report"]["census"]["b"], 1);

    assert_eq!(ifam(&["layer2", "--n", "4"]).status.code(), Some(2));
    assert_eq!(ifam(&["layer2", "--n", "4", "--max"]).status.code(), Some(2));
}

#[test]
fn jobs_flag() {
    let out = ifam(&["--jobs", "1", "search", "--n", "3", "--N", "5", "--s", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(ifam(&["--jobs", "0", "layer2", "--n", "5", "--bound"]).status.code(), Some(2));
}
