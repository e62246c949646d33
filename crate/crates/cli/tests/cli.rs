use std::process::Command;

use proptest::prelude::*;
use serde_json::Value;

use dp6a2_cli::{log_grid, parse_grid, refine_grid};

fn dp6a2(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dp6a2"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exited"),
        String::from_utf8(out.stdout).unwrap(),
    )
}

#[test]
fn count_both_at_one() {
    let (code, out) = dp6a2(&["count", "--max-height", "1"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["command"], "count");
    let row = &v["results"]["rows"][0];
    assert_eq!((&row["N_direct"], &row["T"], &row["N_zero"]), (&"7".into(), &"0".into(), &"7".into()));
    assert_eq!(v["results"]["equal"], true);
    assert_eq!(v["passed"], true);
}

#[test]
fn count_both_at_thousand() {
    let (code, out) = dp6a2(&["count", "--max-height", "1e3", "--threads", "1"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let row = &v["results"]["rows"][0];
    assert_eq!(row["N_direct"], row["N_torsor_total"]);
}

#[test]
fn csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let (code, out) = dp6a2(&[
        "count",
        "--grid",
        "1,10,100",
        "--method",
        "torsor",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!((code, out.as_str()), (0, ""));
    let text = std::fs::read_to_string(path).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(
        rdr.headers().unwrap(),
        vec!["B", "N_direct", "T", "N_zero", "N_torsor_total", "seconds_direct", "seconds_torsor"]
    );
    let totals: Vec<String> = rdr.records().map(|r| r.unwrap()[4].to_string()).collect();
    assert_eq!(totals.len(), 3);
    assert_eq!(totals[0], "7");
}

#[test]
fn verify_exit_codes() {
    let (code, out) = dp6a2(&["verify", "--suite", "fp"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"passed\": true"));
    // the F1 <= 2/sqrt(u) check fails and carries a counterexample
    let (code, out) = dp6a2(&["verify", "--suite", "bounds"]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v["results"]["checks"][0]["counterexample"].is_string());
}

#[test]
fn configuration_errors_exit_two() {
    assert_eq!(dp6a2(&["count", "--max-height", "0"]).0, 2);
    assert_eq!(dp6a2(&["count", "--max-height", "1e9"]).0, 2);
    assert_eq!(dp6a2(&["constant", "--primes-up-to", "100"]).0, 2);
    assert_eq!(dp6a2(&["fit", "--grid", "10,20,30"]).0, 2);
    assert_eq!(dp6a2(&["verify", "--suite", "nonsense"]).0, 2);
    assert_eq!(dp6a2(&["verify", "--suite", "fp", "--format", "csv"]).0, 2);
}

#[test]
fn reports_are_reproducible() {
    let strip = |s: String| {
        let mut v: Value = serde_json::from_str(&s).unwrap();
        v.as_object_mut().unwrap().remove("timings");
        v["results"]["rows"]
            .as_array_mut()
            .unwrap()
            .iter_mut()
            .for_each(|r| {
                r["seconds_direct"] = Value::Null;
                r["seconds_torsor"] = Value::Null;
            });
        v
    };
    let a = strip(dp6a2(&["count", "--grid", "1:1000:4"]).1);
    let b = strip(dp6a2(&["count", "--grid", "1:1000:4"]).1);
    assert_eq!(a, b);
}

#[test]
fn grid_forms_agree() {
    assert_eq!(parse_grid("1e4:1e7:4").unwrap(), parse_grid("10000,100000,1000000,10000000").unwrap());
}

proptest! {
    #[test]
    fn log_grid_is_increasing(lo in 1i64..10_000, span in 1i64..1_000_000, n in 2usize..40) {
        let hi = lo + span;
        let g = log_grid(lo, hi, n);
        prop_assert_eq!(g[0], lo);
        prop_assert_eq!(*g.last().unwrap(), hi);
        prop_assert!(g.windows(2).all(|w| w[0] < w[1]));
        let r = refine_grid(&g);
        prop_assert!(g.iter().all(|b| r.binary_search(b).is_ok()));
        prop_assert!(r.windows(2).all(|w| w[0] < w[1]));
    }
}
