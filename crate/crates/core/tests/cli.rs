//! The command line as a user sees it: exit codes, byte-identical reports,
//! diagnostics and replay of stored counterexamples.

use std::path::PathBuf;
use std::process::{Command, Output};

fn tvoa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tvoa"))
        .args(args)
        .env_remove("TVOA_CEILINGS")
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tvoa-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn reruns_are_byte_identical() {
    for args in [
        &["check-ghost", "--max-weight", "3", "--index-range", "2"][..],
        &["check-brst", "--max-weight", "3"][..],
        &["sew", "--order", "3", "--witt-range", "3", "--samples", "1"][..],
    ] {
        let (a, b) = (tvoa(args), tvoa(args));
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!stdout(&a).contains("timing_ms"));
    }
}

#[test]
fn timing_is_opt_in() {
    let o = tvoa(&["check-ghost", "--max-weight", "1", "--index-range", "1", "--timing"]);
    assert!(stdout(&o).contains("\"timing_ms\""));
}

#[test]
fn vacuous_ghost_check_passes() {
    let o = tvoa(&["check-ghost", "--max-weight", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(tvoa(&["check-ghost", "--max-weight", "many"]).status.code(), Some(1));
    assert_eq!(tvoa(&["check-ghost", "--no-such-flag"]).status.code(), Some(1));
    assert_eq!(tvoa(&["check-brst", "--central-charge", "1/0"]).status.code(), Some(1));
    assert_eq!(tvoa(&["check-tvoa", "no-such-instance"]).status.code(), Some(1));
    assert_eq!(tvoa(&["--help"]).status.code(), Some(0));
}

#[test]
fn ceilings_come_from_the_environment() {
    let o = tvoa(&["check-ghost", "--max-weight", "11"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("ceiling"));
    let raised = Command::new(env!("CARGO_BIN_EXE_tvoa"))
        .args(["check-ghost", "--max-weight", "11", "--index-range", "0"])
        .env("TVOA_CEILINGS", "weight=11")
        .output()
        .unwrap();
    assert_eq!(raised.status.code(), Some(0), "{}", stderr(&raised));
    let bad = Command::new(env!("CARGO_BIN_EXE_tvoa"))
        .args(["check-ghost", "--max-weight", "1"])
        .env("TVOA_CEILINGS", "weight=lots")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn failures_exit_with_two_and_replay() {
    let report = scratch("brst-25.json");
    let o = tvoa(&["check-brst", "--central-charge", "25", "--max-weight", "3", "--output", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("FAIL"));
    let r = tvoa(&["replay", report.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0), "{}", stderr(&r));
    let v: serde_json::Value = serde_json::from_str(&stdout(&r)).unwrap();
    let replays = v["data"]["replays"].as_array().unwrap();
    assert!(!replays.is_empty());
    assert!(replays.iter().all(|x| x["reproduced"] == true));
}

#[test]
fn tampered_counterexamples_do_not_replay() {
    let report = scratch("bare.json");
    let o = tvoa(&["check-tvoa", "tensor-26-bare", "--max-weight", "2", "--index-range", "2", "--output", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let text = std::fs::read_to_string(&report).unwrap();
    assert!(text.contains("3*c(0)1"));
    std::fs::write(&report, text.replace("3*c(0)1", "4*c(0)1")).unwrap();
    let r = tvoa(&["replay", report.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(2));
}

#[test]
fn expected_anomaly_passes() {
    let o = tvoa(&["check-brst", "--central-charge", "25", "--max-weight", "4", "--expect-anomaly"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn declarations_are_checked_and_diagnosed() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/declarations/tensor-26.json");
    let o = tvoa(&["check-tvoa", path, "--max-weight", "2", "--index-range", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_ne!(v["input_digest"], tvoa::report::digest(b""));

    let text = std::fs::read_to_string(path).unwrap();
    let broken = scratch("broken.json");
    std::fs::write(&broken, text.replacen("\"odd\": true,", "\"odd\": yes,", 1)).unwrap();
    let o = tvoa(&["check-tvoa", broken.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("parse error at 7:"), "{}", stderr(&o));

    std::fs::write(&broken, text.replace("\"g\": \"b(-2)\"", "\"g\": \"b(-2\"")).unwrap();
    let o = tvoa(&["check-tvoa", broken.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("element g"), "{}", stderr(&o));
}

#[test]
fn twist_pipes_into_the_instance_checks() {
    let o = tvoa(&["twist-n2", "--central-charge", "9", "--max-weight", "2", "--index-range", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let names: Vec<&str> = v["sections"].as_array().unwrap().iter().map(|s| s["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"twist-axioms") && names.contains(&"twisted-virasoro-symbolic"));
}
