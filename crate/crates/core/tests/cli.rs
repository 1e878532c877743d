use std::process::{Command, Output};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_moebius-sieve"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn sieve_prints_primes() {
    let out = cli(&["sieve", "--bound", "200"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("2 3 5 7 11 "));
    assert!(text.contains("\ncount 46\n"));

    let out = cli(&["sieve", "--bound", "10", "--backend", "farey_trie"]);
    assert_eq!(stdout(&out), "2 3 5 7\ncount 4\n");

    let out = cli(&["sieve", "--bound", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "\ncount 0\n");
}

#[test]
fn sieve_summary_formats() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("summary.json");
    let out = cli(&[
        "sieve",
        "--bound",
        "200",
        "--format",
        "structured",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(v["prime_count"], 46);
    assert_eq!(v["composite_count"], 198 - 46);

    let out = cli(&[
        "sieve",
        "--bound",
        "10",
        "--format",
        "rows",
        "--backend",
        "baseline",
    ]);
    let text = stdout(&out);
    assert!(text.contains("prime,7\n") && text.contains("prime_count,4\n"));
}

#[test]
fn verify_exit_codes() {
    for args in [
        &["verify", "--bound", "200"][..],
        &["verify", "--bound", "2"],
        &["verify", "--bound", "5000", "--backend", "hash"],
        &["verify", "--bound", "300", "--backend", "farey_trie"],
    ] {
        let out = cli(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        assert!(stdout(&out).ends_with("SUCCESS\n"));
    }
}

#[test]
fn trace_to_file_and_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let out = cli(&["trace", "--bound", "3", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("1 rows"));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 2);

    let out = cli(&["trace", "--bound", "5"]);
    assert_eq!(stdout(&out).lines().count(), 7);
}

#[test]
fn intersect_outputs() {
    let out = cli(&["intersect", "--bound", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("intersection \n"));
    assert!(text.contains("matches_expected false"));

    let out = cli(&["intersect", "--bound", "200", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["intersection"], serde_json::json!(["2/5", "3/7"]));
    assert_eq!(v["matches_expected"], true);
}

#[test]
fn gaps_table() {
    let out = cli(&["gaps", "--bound", "12"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let composites: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("7,11,"))
        .map(|l| l.split(',').nth(3).unwrap())
        .collect();
    assert_eq!(composites, ["8", "9", "10"]);

    let text = stdout(&cli(&["gaps", "--bound", "6"]));
    assert!(text.lines().any(|l| l == "3,5,2,4,2,1,2,0,2,1,1"));
    assert!(cli(&["gaps", "--bound", "5"]).status.success());
}

#[test]
fn bench_table() {
    let out = cli(&[
        "bench",
        "--bounds",
        "100,200",
        "--backends",
        "baseline,hash",
        "--repetitions",
        "1",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 6);
    assert_eq!(rows.iter().filter(|l| l.contains("\toracle\t")).count(), 2);

    let out = cli(&["bench", "--bounds", "2", "--backends", "hash"]);
    assert!(out.status.success());
}

#[test]
fn invalid_invocations_exit_2() {
    for args in [
        &["sieve", "--bound", "1"][..],
        &["sieve", "--bound", "10", "--bogus"],
        &["sieve", "--bound", "10", "--backend", "trie"],
        &["intersect", "--bound", "2"],
        &["gaps", "--bound", "4"],
        &["frobnicate"],
    ] {
        assert_eq!(cli(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn memory_ceiling_refusal_exits_3() {
    let out = cli(&["sieve", "--bound", "100001"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("memory ceiling"));
    let out = cli(&["bench", "--bounds", "10,1000000", "--backends", "hash"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn unwritable_output_exits_4() {
    let out = cli(&["trace", "--bound", "10", "--out", "/nonexistent-dir/t.csv"]);
    assert_eq!(out.status.code(), Some(4));
}
