//! End-to-end checks of the command-line surface: exit codes and report
//! shapes.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_blockcoh"))
}

#[test]
fn scan_s3_p3_exits_zero_with_expected_record() {
    let out = bin()
        .args([
            "scan",
            "--group",
            "S 3",
            "--prime",
            "3",
            "--max-degree",
            "4",
            "--suite",
            "sasaki",
        ])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["hard_failures"].as_array().unwrap().len(), 0);
    let rec = &report["records"][0];
    assert_eq!(rec["group"], "S 3");
    assert_eq!(rec["prime"], 3);
    assert_eq!(rec["defect_order"], 3);
    let dims: Vec<u64> = rec["degrees"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| d["dim_image"].as_u64().unwrap())
        .collect();
    assert_eq!(dims, vec![1, 0, 0, 1, 1]);
    assert!(rec["degrees"]
        .as_array()
        .unwrap()
        .iter()
        .all(|d| d["equal"].as_bool().unwrap()));
}

#[test]
fn scan_c2_p2_blocks_suite() {
    let out = bin()
        .args([
            "scan", "--group", "C 2", "--prime", "2", "--suite", "blocks",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let records = report["records"].as_array().unwrap();
    assert_eq!(records.len(), 1, "one block");
    assert_eq!(records[0]["defect_order"], 2);
}

#[test]
fn missing_prime_is_usage_error() {
    let out = bin().args(["scan", "--group", "C 2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_group_token_is_usage_error() {
    let out = bin()
        .args(["scan", "--group", "X 7", "--prime", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("X"), "message names the token: {err}");
}

#[test]
fn unknown_suite_is_usage_error() {
    let out = bin()
        .args([
            "scan", "--group", "C 2", "--prime", "2", "--suite", "nonsense",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_commands_pass() {
    for args in [
        vec![
            "verify",
            "mackey",
            "--group",
            "S 3",
            "--prime",
            "3",
            "--hh-degree",
            "1",
        ],
        vec!["verify", "delta-square", "--group", "S 3", "--prime", "3"],
        vec!["verify", "hh-square", "--group", "S 4", "--prime", "3"],
        vec!["verify", "transitivity", "--group", "S 4", "--prime", "3"],
    ] {
        let out = bin().args(&args).output().unwrap();
        assert!(
            out.status.success(),
            "{args:?}: {}{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        );
        let text = String::from_utf8_lossy(&out.stdout);
        assert!(text.contains("PASS"));
    }
}

#[test]
fn verify_unknown_suite_exits_one() {
    let out = bin()
        .args(["verify", "nope", "--group", "S 3", "--prime", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn block_info_c4_p2() {
    let out = bin()
        .args(["block-info", "--group", "C 4", "--prime", "2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("1 block(s)"));
    assert!(text.contains("multiplicity 1"));
}

#[test]
fn scan_report_file_and_determinism() {
    let dir = std::env::temp_dir();
    let p1 = dir.join("blockcoh_cli_report_1.json");
    let p2 = dir.join("blockcoh_cli_report_2.json");
    for p in [&p1, &p2] {
        let out = bin()
            .args([
                "scan",
                "--group",
                "A 4",
                "--prime",
                "2",
                "--max-degree",
                "2",
                "--suite",
                "sasaki,transfer",
                "--out",
                p.to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert!(out.status.success());
    }
    let mut a: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&p1).unwrap()).unwrap();
    let mut b: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&p2).unwrap()).unwrap();
    // timing fields are the only permitted difference
    zero_elapsed(&mut a);
    zero_elapsed(&mut b);
    assert_eq!(a, b, "reports are deterministic up to timing");
    let _ = std::fs::remove_file(p1);
    let _ = std::fs::remove_file(p2);
}

fn zero_elapsed(v: &mut serde_json::Value) {
    match v {
        serde_json::Value::Object(map) => {
            if let Some(e) = map.get_mut("elapsed_ms") {
                *e = serde_json::Value::from(0u64);
            }
            for (_, val) in map.iter_mut() {
                zero_elapsed(val);
            }
        }
        serde_json::Value::Array(arr) => {
            for val in arr.iter_mut() {
                zero_elapsed(val);
            }
        }
        _ => {}
    }
}
