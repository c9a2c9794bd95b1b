use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_padic-sums"))
        .args(args)
        .env("PADIC_SUMS_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn tables_reproduce_integer_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["tables", "--kmax", "11", "--eps", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("u_11 = 17731  v_11 = 13209"));

    let o = run(dir.path(), &["tables", "--kmax", "1", "--eps", "-1"]);
    assert!(stdout(&o).contains("A_1 = (n-2)x - 1"));

    let o = run(dir.path(), &["tables", "--kmax", "0", "--eps", "+1"]);
    let text = stdout(&o);
    assert!(text.contains("A_0 = 1\n") && !text.contains("A_1"));
}

#[test]
fn warm_cache_output_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cold = run(dir.path(), &["tables", "--kmax", "5", "--format", "json"]);
    let info = stdout(&run(dir.path(), &["cache", "info"]));
    assert!(info.contains("2 tables"), "{info}");
    let warm = run(dir.path(), &["tables", "--kmax", "5", "--format", "json"]);
    assert_eq!(cold.stdout, warm.stdout);
    let json: serde_json::Value = serde_json::from_slice(&cold.stdout).unwrap();
    assert_eq!(json[0]["eps"], 1);
    assert_eq!(json[0]["u"][1], "1");
    assert!(stdout(&run(dir.path(), &["cache", "clear"])).contains("removed 2"));
}

#[test]
fn tables_csv_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let o = run(dir.path(), &["--no-cache", "tables", "--kmax", "2", "--eps", "1", "--format", "csv", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = fs::read_to_string(out).unwrap();
    assert!(text.starts_with("table,eps,k,value\n"));
    assert!(text.contains("A,1,2,(n^2-3n+3)x^2 + (n-5)x + 1"));
}

#[test]
fn sequences_in_each_format() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["seq", "A+0,1", "--kmax", "5"]);
    assert_eq!(stdout(&o), "# A+(0;1)\n0 1\n1 -1\n2 -1\n3 5\n4 -5\n5 -21\n");
    let o = run(dir.path(), &["seq", "U-(1)", "--kmax", "6", "--format", "text"]);
    assert_eq!(stdout(&o), "U-(1): 2, -5, 15, -52, 203, -877\n");
    let o = run(dir.path(), &["seq", "nope"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn compare_against_bell_numbers_up_to_sign() {
    let dir = tempfile::tempdir().unwrap();
    let bell = dir.path().join("b000110.txt");
    fs::write(&bell, "# Bell numbers\n0 1\n1 1\n2 2\n3 5\n4 15\n5 52\n6 203\n7 877\n8 4140\n").unwrap();
    let o = run(dir.path(), &["seq-compare", "U-(1)", bell.to_str().unwrap(), "--kmax", "7", "--offset", "1"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("7 terms compared, match (up to sign)"));
}

#[test]
fn shifted_reference_is_flagged() {
    let dir = tempfile::tempdir().unwrap();
    let shifted = dir.path().join("shifted.txt");
    fs::write(&shifted, "0 -3\n1 9\n2 -31\n3 121\n4 -523\n").unwrap();
    let o = run(dir.path(), &["seq-compare", "A-0,1", shifted.to_str().unwrap(), "--kmax", "5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("mismatch at index 0"));
}

#[test]
fn malformed_bfile_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "0 1\n\n1 one\n").unwrap();
    let o = run(dir.path(), &["seq-compare", "A+0,1", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn wrong_claim_fails_with_first_violation() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["verify", "padic", "--claim", "-2", "--primes", "2,3", "--N", "40"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("first violating N = 2"));
    let o = run(dir.path(), &["verify", "padic", "--claim", "-1", "--primes", "2,3,5", "--N", "40", "--format", "json"]);
    assert!(o.status.success());
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(json["checks"].as_array().unwrap().len(), 3);
}

#[test]
fn general_claim_with_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    // C = (2, -1/3): Q = 2 V_1(1) - V_2(1)/3 = -2 - 1/3
    let o = run(dir.path(), &["verify", "padic", "--claim", "-7/3", "--coeffs", "2,-1/3", "--primes", "2,3,5", "--N", "60"]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn small_grids_pass_and_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let finite = ["verify", "finite", "--kmax", "4", "--N", "10", "--x", "-2/3,2", "--format", "json"];
    let par = run(dir.path(), &finite);
    assert!(par.status.success());
    let mut seq_args = vec!["--sequential"];
    seq_args.extend(finite);
    assert_eq!(par.stdout, run(dir.path(), &seq_args).stdout);

    for args in [
        vec!["verify", "telescope", "--count", "5", "--seed", "9"],
        vec!["verify", "padic", "--kmax", "2", "--primes", "2,3", "--N", "40"],
        vec!["verify", "ode", "--N", "12", "--format", "csv"],
    ] {
        let o = run(dir.path(), &args);
        assert!(o.status.success(), "{args:?}: {}", stdout(&o));
    }
    let a = run(dir.path(), &["verify", "telescope", "--count", "5", "--seed", "9", "--format", "json"]);
    let b = run(dir.path(), &["verify", "telescope", "--count", "5", "--seed", "9", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn invalid_arguments_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["verify", "padic", "--primes", "4"],
        vec!["verify", "finite", "--x", "0.5"],
        vec!["tables", "--eps", "2"],
    ] {
        let o = run(dir.path(), &args);
        assert!(!o.status.success(), "{args:?} accepted");
    }
}
