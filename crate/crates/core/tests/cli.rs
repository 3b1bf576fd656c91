use std::process::{Command, Output};

use serde_json::Value;

fn bsc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bsc")).args(args).output().expect("bsc runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn pair_strings(pairs: &Value) -> Vec<(String, String)> {
    pairs
        .as_array()
        .expect("pair list")
        .iter()
        .map(|p| (p["gamma1"].as_str().unwrap().to_string(), p["gamma2"].as_str().unwrap().to_string()))
        .collect()
}

#[test]
fn classify_three_eighths_matches_golden() {
    let o = bsc(&["classify", "3/8", "--json"]);
    assert_eq!(code(&o), 0);
    let golden = include_str!("golden/classify_3_8.json");
    assert_eq!(String::from_utf8(o.stdout).unwrap(), golden);
}

#[test]
fn classify_three_channel_fraction_has_witness() {
    let o = bsc(&["classify", "--cf", "2,-2,2,2,-2", "--json"]);
    assert_eq!(code(&o), 10);
    let v = json(&o);
    assert_eq!(v["version"], "1");
    assert_eq!(v["command"], "classify");
    assert_eq!(v["input"]["cf"], "2,-2,2,2,-2");
    assert_eq!(v["result"]["outcome"], "no_complete_exceptional");
    let witness = v["result"]["witness"].as_array().unwrap();
    assert_eq!(witness.iter().filter(|a| a.get("channel").is_some()).count(), 3);
    assert!(witness.iter().all(|a| a.get("edge").is_some() || a.get("channel").is_some()));
}

#[test]
fn invalid_inputs_exit_two() {
    let o = bsc(&["classify", "3/4"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("torus"));

    let o = bsc(&["classify", "3/4", "--json"]);
    assert_eq!(code(&o), 2);
    assert_eq!(json(&o)["result"]["error"]["kind"], "torus_link");

    for bad in ["3/7", "0.375", "abc", "1/0"] {
        assert_eq!(code(&bsc(&["classify", bad])), 2, "{bad}");
    }
    assert_eq!(code(&bsc(&["classify", "--cf", "2,x"])), 2);
    assert_eq!(code(&bsc(&["classify"])), 2);
}

#[test]
fn mirrored_slopes_are_negated_only_on_request() {
    let plain = json(&bsc(&["classify", "19/30", "--json"]));
    let mirrored = json(&bsc(&["classify", "19/30", "--json", "--mirror-slopes"]));
    assert_eq!(plain["result"]["mirrored"], true);
    assert_eq!(plain["result"]["slopes_mirrored"], false);
    assert_eq!(mirrored["result"]["slopes_mirrored"], true);
    let a = pair_strings(&plain["result"]["slopes"]);
    let b = pair_strings(&mirrored["result"]["slopes"]);
    assert_eq!(a.len(), b.len());
    for ((x1, y1), (x2, y2)) in a.iter().zip(&b) {
        assert_eq!(format!("-{x1}"), *x2);
        assert_eq!(format!("-{y1}"), *y2);
    }

    // not mirrored, so the flag changes nothing
    let o = json(&bsc(&["classify", "3/8", "--json", "--mirror-slopes"]));
    assert_eq!(o["result"]["slopes_mirrored"], false);
}

#[test]
fn classify_exact_policy_lists_rows() {
    let v = json(&bsc(&["classify", "3/8", "--json", "--policy", "exact"]));
    let rows: Vec<&str> =
        v["result"]["slope_rows"].as_array().unwrap().iter().map(|r| r["row"].as_str().unwrap()).collect();
    assert_eq!(rows, ["a1-3-3", "a1-3-n", "a1-m-3", "a1-general"]);
    assert_eq!(code(&bsc(&["classify", "3/8", "--policy", "partition"])), 2);
}

#[test]
fn slopes_exact_three_three() {
    let o = bsc(&["slopes", "--family", "a1", "--m", "1", "--n", "2", "--policy", "exact", "--json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let row = &v["result"]["rows"][0];
    assert_eq!(row["row"], "a1-3-3");
    let want = [("-2/1", "-2/1"), ("-2/1", "-1/1"), ("-1/1", "-4/1"), ("-1/1", "-3/1"), ("-1/1", "-1/1"), ("5/1", "4/3")];
    let want: Vec<(String, String)> = want.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    assert_eq!(pair_strings(&row["pairs"]), want);
    let names: Vec<&str> =
        v["result"]["surgery"]["coefficients"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["-1/m", "-1/n"]);
}

#[test]
fn slopes_c2_is_empty_and_general_row_substitutes() {
    let o = bsc(&["slopes", "--family", "c2", "--m", "1", "--n", "2", "--l", "1", "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["result"]["rows"][0]["pairs"], Value::Array(vec![]));

    let v = json(&bsc(&["slopes", "--family", "a1", "--m", "2", "--n", "3", "--json"]));
    let pairs = pair_strings(&v["result"]["rows"][0]["pairs"]);
    assert!(pairs.contains(&("3/1".into(), "7/1".into())));
    assert!(pairs.contains(&("9/2".into(), "11/2".into())));
}

#[test]
fn slopes_rejects_bad_parameters() {
    assert_eq!(code(&bsc(&["slopes", "--family", "a1", "--m", "1", "--n", "1"])), 2);
    assert_eq!(code(&bsc(&["slopes", "--family", "b1", "--m", "1", "--n", "2", "--l", "2"])), 2);
    assert_eq!(code(&bsc(&["slopes", "--family", "z9", "--m", "1", "--n", "2"])), 2);
    assert_eq!(code(&bsc(&["slopes", "--family", "c1", "--m", "1", "--n", "-1"])), 2);
}

#[test]
fn slopes_dump_is_lossless() {
    let o = bsc(&["slopes", "--dump-tables"]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8(o.stdout).unwrap(), include_str!("../data/tables.json"));
}

#[test]
fn diagram_stats_and_files() {
    let v = json(&bsc(&["diagram", "--cf", "2,4,2", "--format", "dot", "--json"]));
    assert_eq!(v["result"]["max_channels"], 1);
    assert!(v["result"]["drawing"].as_str().unwrap().starts_with("graph diagram {"));

    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("d.svg");
    let o = bsc(&["diagram", "--cf", "-2,2,4,2", "--format", "svg", "--out", svg.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("class=\"star\"").count(), 3);

    let path_svg = dir.path().join("p.svg");
    let o = bsc(&["diagram", "--cf", "2,6,2", "--with-path", "2", "--out", path_svg.to_str().unwrap(), "--json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["result"]["path"]["channels"], 2);
    assert_eq!(v["result"]["path"]["met"], true);
    assert_eq!(std::fs::read_to_string(&path_svg).unwrap().matches("channel highlighted").count(), 2);
}

#[test]
fn diagram_without_out_writes_drawing_to_stdout() {
    let o = bsc(&["diagram", "3/8", "--format", "dot"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("graph diagram {"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("max-channels="));
}

#[test]
fn diagram_error_codes() {
    let o = bsc(&["diagram", "--cf", "2,4,2", "--out", "/nonexistent-dir/x/d.svg"]);
    assert_eq!(code(&o), 3);
    let o = Command::new(env!("CARGO_BIN_EXE_bsc"))
        .args(["diagram", "--cf", "2,-2,2,2,-2", "--format", "dot"])
        .env("BSC_NODE_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(code(&o), 4);
    assert_eq!(code(&bsc(&["diagram", "--cf", "2,4,2", "--format", "png"])), 2);
}

#[test]
fn verify_exit_codes() {
    let o = bsc(&["verify", "--suite", "a1", "--json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["result"]["suite"], "a1");
    assert_eq!(v["result"]["failures"], Value::Array(vec![]));
    assert!(v["result"]["negative_control"]["detected"].as_u64().unwrap() > 0);

    assert_eq!(code(&bsc(&["verify", "--suite", "canon", "--bound", "60", "--jobs", "2"])), 0);
    assert_eq!(code(&bsc(&["verify", "--suite", "nope"])), 2);

    // the exceptional shapes with m >= 2 carry three-channel paths
    let o = bsc(&["verify", "--suite", "prop23", "--bound", "6", "--json"]);
    assert_eq!(code(&o), 20);
    let failures = json(&o)["result"]["failures"].as_array().unwrap().clone();
    assert_eq!(failures.len(), 6);
    assert!(failures.iter().all(|f| f["detail"] == "exceptional shape ceiling"));
}

#[test]
fn verify_all_reports_every_suite() {
    let o = bsc(&["verify", "--suite", "all", "--jobs", "4", "--json"]);
    let v = json(&o);
    let reports = v["result"]["reports"].as_array().unwrap();
    let names: Vec<&str> = reports.iter().map(|r| r["suite"].as_str().unwrap()).collect();
    assert_eq!(names, ["a1", "a2", "a3", "prop23", "canon"]);
    let failing: Vec<&str> =
        reports.iter().filter(|r| r["passed"] == false).map(|r| r["suite"].as_str().unwrap()).collect();
    assert_eq!(failing, ["prop23"]);
    assert_eq!(code(&o), 20);
}

#[test]
fn help_exits_zero() {
    let o = bsc(&["--help"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("classify"));
}
