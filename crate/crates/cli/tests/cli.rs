use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn problems(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../problems").join(name);
    p.to_str().unwrap().to_string()
}

fn lcllab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lcllab"))
        .args(args)
        .env_remove("LCLLAB_JOBS")
        .env_remove("LCLLAB_BUDGET_MS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn without_wallclock(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("wallclock_ms");
    v
}

#[test]
fn classify_two_coloring() {
    let v = json(&lcllab(&["classify", &problems("two_coloring.lcl")]));
    assert_eq!(v["tool"], "lcllab");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["command"], "classify");
    assert_eq!(v["result"]["class"], "GLOBAL");
    assert_eq!(v["result"]["mixing"], true);
    assert!(v["wallclock_ms"].is_u64());
}

#[test]
fn classify_catalog_files() {
    for (file, class) in [
        ("all_red.lcl", "O1"),
        ("three_coloring.lcl", "LOGSTAR"),
        ("mark_3rd.lcl", "GLOBAL"),
        ("three_coloring_of_blocks.lcl", "BOREL"),
        ("identity_swap.lcl", "GLOBAL"),
        ("three_coloring_r1.lcl", "LOGSTAR"),
    ] {
        let v = json(&lcllab(&["classify", &problems(file)]));
        assert_eq!(v["result"]["class"], class, "{file}");
    }
    let v = json(&lcllab(&["classify", "builtin:mis"]));
    assert_eq!(v["result"]["class"], "LOGSTAR");
}

#[test]
fn report_keys_in_order() {
    let out = lcllab(&["classify", &problems("two_coloring.lcl")]);
    let text = String::from_utf8(out.stdout).unwrap();
    let pos = |k: &str| text.find(&format!("\"{k}\"")).unwrap_or_else(|| panic!("missing {k}"));
    assert!(pos("tool") < pos("version") && pos("version") < pos("command"));
    assert!(pos("command") < pos("result") && pos("result") < pos("wallclock_ms"));
    assert!(pos("problem") < pos("mixing") && pos("mixing") < pos("class"));
}

#[test]
fn solve_odd_cycle_is_unsat_not_error() {
    let v = json(&lcllab(&["solve", &problems("two_coloring.lcl"), &problems("cycle5.inst")]));
    assert_eq!(v["result"]["sat"], false);
    assert_eq!(v["result"]["coloring"], Value::Null);
    assert_eq!(v["result"]["violations"], serde_json::json!([]));
}

#[test]
fn solve_general_form_projects() {
    let v = json(&lcllab(&["solve", &problems("three_coloring_r1.lcl"), &problems("cycle6.inst"), "--count"]));
    assert_eq!(v["result"]["sat"], true);
    assert_eq!(v["result"]["coloring"].as_array().unwrap().len(), 6);
    // 3-colorings of C_6: 2^6 + 2
    assert_eq!(v["result"]["count"], "66");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(lcllab(&["classify", "missing.lcl"]).status.code(), Some(2));
    assert_eq!(lcllab(&["classify"]).status.code(), Some(2));
    assert_eq!(lcllab(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(lcllab(&["classify", &problems("all_red.lcl"), "--cap-out", "0"]).status.code(), Some(2));
}

#[test]
fn domain_errors_exit_1() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.lcl");
    std::fs::write(&bad, "problem x\ninputs: u\noutputs: a\nallow: (u,u | a,b)\n").unwrap();
    let out = lcllab(&["classify", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"));
    // 2-coloring has no ergodic certificate
    assert_eq!(lcllab(&["simulate", "builtin:2-coloring", "--alg", "ergodic", "--n", "40"]).status.code(), Some(1));
}

#[test]
fn unwritable_out_exits_1() {
    let dir = TempDir::new().unwrap();
    let target = dir.path().join("no/such/dir/report.json");
    let out = lcllab(&["classify", &problems("all_red.lcl"), "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_for_every_subcommand() {
    for sub in ["classify", "normalize", "solve", "simulate", "gen", "check"] {
        let out = lcllab(&[sub, "--help"]);
        assert!(out.status.success(), "{sub}");
        assert!(String::from_utf8_lossy(&out.stdout).contains("--replay"), "{sub}");
    }
}

#[test]
fn runs_are_deterministic_and_replayable() {
    let dir = TempDir::new().unwrap();
    let cases: Vec<Vec<String>> = vec![
        vec!["classify".into(), problems("three_coloring_of_blocks.lcl"), "--full".into()],
        vec!["solve".into(), problems("identity_swap.lcl"), problems("superblocks.inst")],
        vec!["simulate".into(), "builtin:mis".into(), "--alg".into(), "ergodic".into(), "--n".into(), "500".into()],
        vec!["gen".into(), "--family".into(), problems("chain3.fam"), "--n".into(), "300".into()],
        vec!["normalize".into(), problems("three_coloring_r1.lcl")],
    ];
    for (i, args) in cases.iter().enumerate() {
        let path = dir.path().join(format!("r{i}.json"));
        let p = path.to_str().unwrap();
        let mut a: Vec<&str> = args.iter().map(String::as_str).collect();
        a.extend(["--seed", "9"]);
        let first = json(&lcllab(&a));
        let second = json(&lcllab(&a));
        assert_eq!(without_wallclock(first), without_wallclock(second), "{args:?}");

        let mut with_out = a.clone();
        with_out.extend(["--out", p]);
        assert!(lcllab(&with_out).status.success());
        let mut again = a.clone();
        again.extend(["--replay", p]);
        assert!(lcllab(&again).status.success(), "{args:?} replay");

        let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        v["command"] = "tampered".into();
        std::fs::write(&path, v.to_string()).unwrap();
        assert_eq!(lcllab(&again).status.code(), Some(1), "{args:?} tampered replay");
    }
}

#[test]
fn gen_writes_instance_and_marks() {
    let dir = TempDir::new().unwrap();
    let inst = dir.path().join("chain.inst");
    let v = json(&lcllab(&[
        "gen", "--family", &problems("chain3.fam"), "--n", "120", "--seed", "7", "--emit", inst.to_str().unwrap(),
    ]));
    let n = v["result"]["n"].as_u64().unwrap();
    assert!(n <= 120);
    let marks: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("chain.inst.marks.json")).unwrap()).unwrap();
    assert_eq!(marks["marks"].as_array().unwrap().len() as u64, n);
    assert_eq!(marks["marks"][0]["start"], true);
    // the instance file parses against the problem it was made for
    let s = json(&lcllab(&["solve", &problems("identity_swap.lcl"), inst.to_str().unwrap()]));
    assert_eq!(s["result"]["n"].as_u64(), Some(n));

    for (m, sat) in [(4, true), (5, false)] {
        let path = dir.path().join(format!("sb{m}.inst"));
        let arg_m = m.to_string();
        json(&lcllab(&["gen", "--superblock", "3", &arg_m, "--emit", path.to_str().unwrap()]));
        let s = json(&lcllab(&["solve", &problems("identity_swap.lcl"), path.to_str().unwrap()]));
        assert_eq!(s["result"]["sat"], sat, "m={m}");
    }
}

#[test]
fn simulate_ruling_from_file() {
    let v = json(&lcllab(&["simulate", &problems("three_coloring.lcl"), "--alg", "ruling", "--k", "3", "--instance", &problems("cycle12_ids.inst")]));
    let gaps: Vec<u64> = v["result"]["gaps"].as_array().unwrap().iter().map(|g| g.as_u64().unwrap()).collect();
    assert_eq!(gaps.iter().sum::<u64>(), 12);
    assert!(gaps.iter().all(|&g| g == 3 || g == 4));
    let v = json(&lcllab(&["simulate", "builtin:copy-input", "--alg", "view", "--t", "1", "--n", "30"]));
    assert_eq!(v["result"]["violations"], serde_json::json!([]));
}

#[test]
fn env_defaults_and_flag_precedence() {
    let run = |env: &[(&str, &str)], args: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_lcllab"));
        c.args(args);
        for (k, v) in env {
            c.env(k, v);
        }
        c.output().unwrap()
    };
    let p = problems("all_red.lcl");
    assert_eq!(run(&[("LCLLAB_JOBS", "0")], &["classify", &p]).status.code(), Some(2));
    assert!(run(&[("LCLLAB_JOBS", "0")], &["classify", &p, "--jobs", "1"]).status.success());
    assert_eq!(run(&[("LCLLAB_BUDGET_MS", "0")], &["classify", &p]).status.code(), Some(2));
}

#[test]
fn check_passes() {
    let v = json(&lcllab(&["check"]));
    assert_eq!(v["result"]["passed"], true);
    assert!(v["result"]["checks"].as_array().unwrap().len() >= 4);
}
