use std::process::{Command, Output};

use serde_json::Value;
use shiftlab::arre_invert::{self, ROutcome};
use shiftlab::lemma::Family;
use shiftlab::BiSeq;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shiftlab"))
        .args(args)
        .env_remove("SHIFTLAB_NMAX_DEFAULT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = run(args);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    stdout(&o)
}

#[test]
fn seq_eval_and_shift() {
    let x = "left=const:1;center@-1=[5,0,2];right=const:0";
    assert_eq!(ok(&["seq", "eval", "--seq", x, "--at", "-1"]).trim(), "5");
    assert_eq!(
        ok(&["seq", "eval", "--seq", x, "--window", "-3,2"]).trim(),
        "1 1 5 0 2 0"
    );
    let shifted = ok(&["seq", "shift", "--seq", x, "--by", "-2"]);
    let y: BiSeq = shifted.trim().parse().unwrap();
    assert_eq!(y.symbol_at(1), 5);
}

#[test]
fn distance_is_exact() {
    let a = "left=const:0;center@3=[1];right=const:0";
    let b = "left=const:0;center@0=[];right=const:0";
    assert_eq!(ok(&["seq", "dist", "--x", a, "--y", b]).trim(), "2^-3");
    assert_eq!(ok(&["seq", "dist", "--x", a, "--y", a]).trim(), "0");
}

#[test]
fn two_point_blocks_of_ones() {
    for k in 1..=6i64 {
        let x = Family::NoImage.member(k as u64).to_string();
        let w = format!("{},{}", -k, k);
        let got = ok(&[
            "morph",
            "apply",
            "--rule",
            "two-point",
            "--seq",
            &x,
            "--window",
            &w,
        ]);
        assert_eq!(got.trim(), vec!["1"; (2 * k + 1) as usize].join(" "));
    }
}

#[test]
fn arre_invert_round_trips_generated_images() {
    for center in [
        vec![3, 5, 0, 7],
        vec![8, 4, 2, 1],
        vec![0, 0, 9],
        vec![64, 1, 33, 2, 17],
    ] {
        let x = BiSeq::finite_support(-2, center);
        let y = ok(&["morph", "apply", "--rule", "arre", "--seq", &x.to_string()]);
        let back = ok(&["arre", "invert", "--seq", y.trim(), "--nmax", "32"]);
        let back: BiSeq = back.trim().parse().unwrap();
        assert_eq!(back, x);
    }
    let ones = "left=const:1;center@0=[];right=const:1";
    assert_eq!(
        ok(&["arre", "invert", "--seq", ones]).trim(),
        "NOT-IN-IMAGE"
    );
}

#[test]
fn arre_solve_lists_the_ambiguous_window() {
    let out = ok(&["arre", "solve", "--window", "16,8,4"]);
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines.contains(&"[8,4,2,1]"));
    assert!(lines.contains(&"[0,8,0,2]"));
    assert_eq!(lines.last(), Some(&"count=3"));
}

#[test]
fn nmax_default_comes_from_the_environment() {
    let (x, _) = arre_invert::ambiguity_pair(3);
    let y = arre_invert::image(&x);
    let ROutcome::Found(r) = arre_invert::compute_r(&y, 64).unwrap() else {
        panic!()
    };
    assert!(r >= 3);
    let y = y.to_string();
    assert_eq!(ok(&["arre", "r", "--seq", &y]).trim(), format!("r={r}"));
    let o = Command::new(env!("CARGO_BIN_EXE_shiftlab"))
        .args(["arre", "r", "--seq", &y])
        .env("SHIFTLAB_NMAX_DEFAULT", "2")
        .output()
        .unwrap();
    assert_eq!(stdout(&o).trim(), "exhausted nmax=2");
}

#[test]
fn json_records_are_one_per_line() {
    let out = ok(&[
        "--json",
        "degree",
        "probe",
        "--rule",
        "two-point",
        "--value",
        "1",
        "--grid",
        "20:1,20:2,20:3",
    ]);
    let records: Vec<Value> = out
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(records.len(), 3);
    let counts: Vec<&str> = records
        .iter()
        .map(|r| r["count"].as_str().unwrap())
        .collect();
    assert_eq!(counts, ["2", "4", "6"]);
    assert!(records.iter().all(|r| r["verdict"] == "growing"));
    let inv = ok(&[
        "--json",
        "arre",
        "invert",
        "--seq",
        "left=const:3;center@0=[];right=const:3",
    ]);
    let v: Value = serde_json::from_str(inv.trim()).unwrap();
    assert_eq!(v["preimage"], "left=const:1;center@0=[];right=const:1");
}

#[test]
fn lemma_classify_reports_c1() {
    let out = ok(&[
        "lemma",
        "classify",
        "--family",
        "zero-drift:2,spread",
        "--rule",
        "zero-locator",
    ]);
    assert!(out.starts_with("class=C1 tag=closed-form"), "{out}");
    assert!(out.contains("h={2:0}"));
    assert!(!out.contains("preimage=none"));
}

#[test]
fn windowed_rule_from_file() {
    let dir = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join("xor.table");
    std::fs::write(
        &path,
        "# memory=0 anticipation=1\n[0,0] -> 0\n[0,1] -> 1\n[1,0] -> 1\n[1,1] -> 0\n",
    )
    .unwrap();
    let rule = format!("windowed:{}", path.display());
    let x = "left=const:0;center@0=[1,1,0,1];right=const:0";
    assert_eq!(
        ok(&["morph", "apply", "--rule", &rule, "--seq", x, "--window", "-1,4"]).trim(),
        "1 0 1 1 1 0"
    );
    let widened = ok(&[
        "morph",
        "widen",
        "--rule",
        &rule,
        "--memory",
        "1",
        "--anticipation",
        "1",
    ]);
    assert!(widened.starts_with("# memory=1 anticipation=1"));
    assert!(ok(&["morph", "commute-check", "--rule", &rule]).contains("violations=0"));
}

#[test]
fn commute_check_is_seeded() {
    let a = ok(&[
        "--seed",
        "9",
        "--json",
        "morph",
        "commute-check",
        "--rule",
        "zero-locator",
        "--samples",
        "30",
    ]);
    let b = ok(&[
        "--seed",
        "9",
        "--json",
        "morph",
        "commute-check",
        "--rule",
        "zero-locator",
        "--samples",
        "30",
    ]);
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(a.trim()).unwrap();
    assert_eq!(v["violations"], 0);
}

#[test]
fn language_queries() {
    let out = ok(&[
        "lang",
        "blocks",
        "--space",
        "forbid:fin[0,1]{[1,1]}",
        "--len",
        "4",
    ]);
    assert_eq!(out.lines().last(), Some("count=8"));
    let f = ok(&[
        "lang",
        "followers",
        "--space",
        "builtin:injective-with-zero",
        "--symbol",
        "2",
        "--bound",
        "4",
    ]);
    assert_eq!(f.trim(), "[0,1,3,4] exhaustive=false");
    let fin = ok(&["lang", "finiteness", "--space", "forbid:fin[0,1]{[1,1]}"]);
    assert!(fin.trim_end().ends_with("verdict=finite"));
}

#[test]
fn examples_run_and_list() {
    let list = ok(&["examples", "list"]);
    assert_eq!(list.lines().count(), 6);
    let out = ok(&["examples", "run", "arre-ambiguity"]);
    assert!(out
        .trim_end()
        .ends_with("example=arre-ambiguity result=pass"));
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["frobnicate"],
        vec!["seq", "eval", "--seq", "nonsense", "--at", "0"],
        vec![
            "morph",
            "apply",
            "--rule",
            "nope",
            "--seq",
            "left=const:0;center@0=[];right=const:0",
            "--window",
            "0,1",
        ],
        vec!["examples", "run", "missing"],
        vec![
            "seq",
            "eval",
            "--seq",
            "left=const:0;center@0=[];right=const:0",
            "--window",
            "3,1",
        ],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}
