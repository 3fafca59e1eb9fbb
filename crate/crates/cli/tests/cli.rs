use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn achro(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_achro"))
        .args(args)
        .env_remove("ACHRO_BUDGET_SECS")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    if let Some(input) = stdin {
        // The process may exit before reading, e.g. on an argument error.
        let _ = child.stdin.take().unwrap().write_all(input.as_bytes());
    } else {
        drop(child.stdin.take());
    }
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stdout(out: &Output) -> &str {
    std::str::from_utf8(&out.stdout).unwrap()
}

#[test]
fn construct_then_verify_rows() {
    let built = achro(&["construct", "2", "3"], None);
    assert!(built.status.success());
    let checked = achro(&["verify", "-", "--mode", "row"], Some(stdout(&built)));
    assert_eq!(checked.status.code(), Some(0));
    let report = json(&checked);
    assert_eq!(report["colour_count"], 21);
    assert_eq!(report["mode"], "row");
}

#[test]
fn theorem_range_pipelines() {
    for r in [2u64, 3, 4] {
        let s = (r.pow(3) + 1).to_string();
        for t in 0..=r {
            let built = achro(&["construct", &r.to_string(), &s, &t.to_string()], None);
            assert!(built.status.success(), "r={r} t={t}");
            let checked = achro(&["verify", "-", "--mode", "row"], Some(stdout(&built)));
            assert_eq!(checked.status.code(), Some(0), "r={r} t={t}");
            let p = r * r + r + 1;
            assert_eq!(json(&checked)["colour_count"], p * (r.pow(3) + 1) + t);
        }
    }
}

#[test]
fn bounds_corollary() {
    let out = achro(&["bounds", "2", "9", "0"], None);
    assert!(out.status.success());
    let report = json(&out);
    assert_eq!(report["exact"], 63);
    assert_eq!(report["lower"]["rule"], "Theorem4.lower");

    let out = achro(&["bounds", "2", "9", "2", "--witness"], None);
    let report = json(&out);
    assert!(report.get("exact").is_none());
    assert_eq!(report["upper"]["value"], 67);
    let witness = serde_json::to_string(&report["witness"]).unwrap();
    let checked = achro(&["verify", "-", "--mode", "row"], Some(&witness));
    assert_eq!(checked.status.code(), Some(0));
    assert_eq!(json(&checked)["colour_count"], 65);
}

#[test]
fn exact_small() {
    let out = achro(&["exact", "2", "3"], None);
    assert!(out.status.success());
    let sol = json(&out);
    assert_eq!(sol["value"], 4);
    assert_eq!(sol["status"], "optimal");
    let witness = serde_json::to_string(&sol["witness"]).unwrap();
    let checked = achro(&["verify", "-"], Some(&witness));
    assert_eq!(checked.status.code(), Some(0));
}

#[test]
fn exact_budget_from_env() {
    let out = Command::new(env!("CARGO_BIN_EXE_achro"))
        .args(["exact", "5", "5"])
        .env("ACHRO_BUDGET_SECS", "0.2")
        .output()
        .unwrap();
    assert!(out.status.success());
    let sol: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(sol["status"], "timed_out");
    assert!(sol["value"].as_u64().unwrap() >= 5);
}

#[test]
fn plane_round_trip() {
    for r in ["2", "3", "4", "5"] {
        let plane = achro(&["plane", r], None);
        assert!(plane.status.success());
        let checked = achro(&["verify-plane", "-"], Some(stdout(&plane)));
        assert_eq!(checked.status.code(), Some(0));
        let again = achro(&["verify-plane", "-"], Some(stdout(&plane)));
        assert_eq!(checked.stdout, again.stdout);
    }
}

#[test]
fn verification_failures_exit_one() {
    let bad = r#"{"rows":2,"cols":2,"cells":[[1,1],[2,3]]}"#;
    let out = achro(&["verify", "-"], Some(bad));
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["proper_rows"]["passed"], false);

    let fake_plane = r#"{"order":2,"lines":[[1,2,3],[1,4,5],[1,6,7],[2,4,6],[2,5,7],[3,4,7],[3,5,7]]}"#;
    let out = achro(&["verify-plane", "-"], Some(fake_plane));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    let out = achro(&["bounds", "2", "8", "1"], None);
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("Theorem 4 requires s ≥ r³+1"), "{msg}");

    let out = achro(&["construct", "2", "5", "1"], None);
    assert_eq!(out.status.code(), Some(2));
    let out = achro(&["construct", "2", "2"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("s ≥ r+1"));
    let out = achro(&["construct", "6", "217", "1"], None);
    assert_eq!(out.status.code(), Some(2));
    let out = achro(&["exact", "12", "12"], None);
    assert_eq!(out.status.code(), Some(2));
    let out = achro(&["verify", "-", "--mode", "diagonal"], Some("{}"));
    assert_eq!(out.status.code(), Some(2));
    let out = achro(&["verify", "-"], Some("not json"));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn intermediate_block_lengths_are_allowed() {
    let out = achro(&["construct", "2", "5"], None);
    assert!(out.status.success());
    let checked = achro(&["verify", "-", "--mode", "row"], Some(stdout(&out)));
    assert_eq!(json(&checked)["colour_count"], 35);
}

#[test]
fn known_and_ratio() {
    let out = achro(&["known", "4", "3"], None);
    assert_eq!(json(&out)["value"], 6);
    let out = achro(&["known", "4", "5"], None);
    assert!(out.status.success());
    assert!(json(&out)["value"].is_null());
    let out = achro(&["ratio", "2"], None);
    assert_eq!(json(&out)["ratio"], "7/3");
}

#[test]
fn verbose_summary_goes_to_stderr() {
    let out = achro(&["-v", "construct", "2", "3"], None);
    assert!(String::from_utf8_lossy(&out.stderr).contains("21 colours"));
    let m: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(m["rows"], 7);
}
