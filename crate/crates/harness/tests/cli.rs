use std::fs;
use std::process::{Command, Output};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_msg-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = lab(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8")
}

#[test]
fn metric_values() {
    let hamming = stdout(&[
        "metric", "--kind", "hamming", "--group", "S3", "1,0,2", "0,1,2",
    ]);
    assert_eq!(hamming, "distance: 2/3\n");
    let conj = stdout(&["metric", "--kind", "conj", "--group", "A5", "1,2,0,3,4"]);
    assert_eq!(conj, "distance: 0.731675663352\n");
    let csv = stdout(&[
        "metric", "--kind", "prank", "--group", "GL2(5)", "1,1;0,1", "--format", "csv",
    ]);
    assert_eq!(csv, "quantity,value\ndistance,1/2\n");
}

#[test]
fn metric_rejects_elements_outside_the_group() {
    let out = lab(&["metric", "--kind", "conj", "--group", "A5", "1,0,2,3,4"]);
    assert!(!out.status.success());
}

#[test]
fn chain_lists_steps_total_and_overshoot() {
    let out = stdout(&[
        "chain",
        "--metric",
        "hamming",
        "--max-step",
        "2/5",
        "1,2,3,4,0",
    ]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "0 0,1,2,3,4");
    assert!(lines.contains(&"total 6/5"), "{out}");
    assert!(lines.contains(&"overshoot 1/5"), "{out}");
    assert!(lines.contains(&"valid true"), "{out}");
}

#[test]
fn extension_field_entries_use_brackets() {
    let out = stdout(&["sl-project", "--field", "2^2:1,1,1", "[0,1],0;0,1"]);
    assert!(out.contains("det: 1,0"), "{out}");
}

#[test]
fn commutator_reports_missing_witness() {
    assert_eq!(
        stdout(&["commutator", "--group", "SL2(3)", "1,1;0,1"]),
        "witness: none\n"
    );
    let out = stdout(&["commutator", "--group", "A5", "1,2,0,3,4"]);
    assert!(out.starts_with("a: "), "{out}");
}

#[test]
fn factorization_prints_descriptor_lines() {
    let out = stdout(&[
        "factorize-centralizer",
        "--field",
        "3",
        "--k",
        "2",
        "0,1;1,0",
    ]);
    assert_eq!(out, "gl 1 1 2\ngl 1 1 2\n");
}

#[test]
fn experiments_are_reproducible() {
    let dir = tempfile::tempdir().expect("tempdir");
    let run = |name: &str| {
        let path = dir.path().join(name);
        let args = [
            "experiment",
            "equivalence",
            "--sizes",
            "50,100",
            "--trials",
            "3",
            "--seed",
            "11",
            "--out",
            path.to_str().expect("utf-8 path"),
        ];
        stdout(&args);
        fs::read(&path).expect("csv written")
    };
    let first = run("a.csv");
    assert_eq!(first, run("b.csv"));
    assert!(String::from_utf8_lossy(&first).starts_with("index,n,q,case,quantity,value\n"));
    let meta = fs::read_to_string(dir.path().join("a.csv.meta")).expect("sidecar");
    assert!(meta.contains("seed = 11"), "{meta}");
}

#[test]
fn mismatched_characteristic_is_rejected() {
    let out = lab(&[
        "experiment",
        "fingerprint",
        "--family",
        "psl",
        "--sizes",
        "2",
        "--fields",
        "3,4",
        "--characteristic",
        "3",
    ]);
    assert!(!out.status.success());
}

#[test]
fn empty_suite_config_is_silent() {
    let dir = tempfile::tempdir().expect("tempdir");
    let cfg = dir.path().join("empty.cfg");
    fs::write(&cfg, "").expect("write config");
    assert_eq!(stdout(&["suite", cfg.to_str().expect("utf-8 path")]), "");
}

#[test]
fn tampered_expectation_fails_the_suite() {
    let dir = tempfile::tempdir().expect("tempdir");
    let cfg = dir.path().join("suite.cfg");
    let body = format!(
        "seed = 3\ntrials = 5\nout_dir = {}\nrun = class_sizes\nexpected.class_sizes.orbit_stabilizer.failures = 7\n",
        dir.path().join("out").display()
    );
    fs::write(&cfg, body).expect("write config");
    let out = lab(&["suite", cfg.to_str().expect("utf-8 path")]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("MISMATCH"));
}
