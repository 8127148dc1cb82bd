use std::process::Command;

fn brannan(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_brannan"))
        .args(args)
        .env_remove("BRANNAN_THREADS")
        .output()
        .expect("binary runs")
}

#[test]
fn coeffs_prints_the_partial_sum() {
    let o = brannan(&[
        "coeffs", "--alpha", "0.5", "--beta", "1", "--m", "3", "--theta", "0",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "1.4375 + 0i");
}

#[test]
fn constants_report_the_negative_entry() {
    let o = brannan(&["constants", "--n", "27", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(1));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 6);
    assert!(text
        .lines()
        .any(|l| l.starts_with("lemma5b_constant,27,") && l.contains(",-2.77")));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = [
        "scan",
        "--check",
        "theorem3",
        "--alpha",
        "0.4:0.8:0.2",
        "--x",
        "0.5:1:0.25",
        "--n",
        "27,30",
        "--format",
        "json",
    ];
    let a = brannan(&args);
    let b = brannan(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["cells_evaluated"].as_u64(), Some(18));
    assert!(v["violations"].as_array().unwrap().is_empty());
    assert!(v["wall_time_seconds"].is_null());
}

#[test]
fn threads_from_environment() {
    let args = [
        "scan",
        "--check",
        "lemma4",
        "--alpha",
        "0:1:0.1",
        "--angle",
        "90:120:5",
        "--degrees",
        "--n",
        "1",
        "--format",
        "csv",
    ];
    let a = Command::new(env!("CARGO_BIN_EXE_brannan"))
        .args(args)
        .env("BRANNAN_THREADS", "1")
        .output()
        .unwrap();
    let b = Command::new(env!("CARGO_BIN_EXE_brannan"))
        .args(args)
        .env("BRANNAN_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(
        String::from_utf8(a.stdout).unwrap().lines().count(),
        1 + 11 * 7
    );
}

#[test]
fn out_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.json");
    let o = brannan(&[
        "scan",
        "--check",
        "brannan",
        "--alpha",
        "0.5",
        "--angle",
        "0",
        "--n",
        "2",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["min_margin"].as_f64(), Some(0.0));
}

#[test]
fn usage_errors() {
    let o = brannan(&["scan", "--check", "brannan", "--alpha", "0.5", "--n", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    let o = brannan(&["theorem3", "--alpha", "0.5", "--x", "0.2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = brannan(&["conjecture", "--alpha", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
}
