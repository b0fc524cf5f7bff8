use std::process::{Command, Output};

fn qtlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qtlab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_json_is_array_of_reports() {
    let o = qtlab(&["verify", "--model", "mv:r=2", "--order", "40", "--jmax", "8", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 4);
    for r in arr {
        assert_eq!(r["status"], "pass");
        assert_eq!(r["model"], "mv:r=2");
        assert!(r["residual"].as_array().unwrap().is_empty());
    }
}

#[test]
fn verify_with_w_constraints() {
    let o = qtlab(&["verify", "--model", "coni:a=1", "--order", "20", "--jmax", "2", "--kmax", "1", "--lmax", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("w_constraints"));
}

#[test]
fn tau_tsv_table() {
    let o = qtlab(&["tau", "--model", "hurwitz", "--dmax", "5", "--format", "tsv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("()\t1\n(1)\t1\n"));
    // one row per partition of size <= 5
    assert_eq!(text.lines().count(), 1 + 1 + 2 + 3 + 5 + 7);
}

#[test]
fn oracle_ends_with_all_match() {
    let o = qtlab(&["oracle", "--dmax", "5", "--bmax", "6", "--format", "tsv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().last(), Some("ALL MATCH"));
}

#[test]
fn output_is_deterministic() {
    let a = stdout(&qtlab(&["verify", "--order", "12", "--jmax", "2"]));
    let b = stdout(&qtlab(&["verify", "--order", "12", "--jmax", "2"]));
    assert_eq!(a, b);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(qtlab(&["verify", "--model", "foo:x=1"]).status.code(), Some(2));
    assert_eq!(qtlab(&["verify", "--order", "0"]).status.code(), Some(2));
    assert_eq!(qtlab(&["oracle", "--dmax", "7"]).status.code(), Some(2));
    assert_eq!(qtlab(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("qtlab-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bf.tsv");
    let o = qtlab(&["bf-check", "--dmax", "3", "--format", "tsv", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("bf_schur"));
    assert!(text.contains("alpha(-4)"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn wave_and_identities_pass() {
    assert_eq!(qtlab(&["wave", "--model", "hurwitz", "--order", "6"]).status.code(), Some(0));
    assert_eq!(qtlab(&["identities", "--xmax", "4", "--qmax", "10"]).status.code(), Some(0));
}
