//! Golden reports, exit codes and report structure of the binary.
//!
//! Set `UPDATE_GOLDEN=1` to rewrite the files under `tests/golden/`.

mod common;

use std::fs;
use std::path::PathBuf;

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

fn fixed17(args: &[&str]) -> Vec<String> {
    ["--float-format", "fixed17"].iter().chain(args).map(|s| s.to_string()).collect()
}

#[test]
fn reports_match_golden_files() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut mismatched = Vec::new();
    for (name, args, _) in common::MATRIX {
        let args = fixed17(args);
        let out = common::run(&args.iter().map(String::as_str).collect::<Vec<_>>());
        let report = common::stdout(&out);
        let path = golden_dir().join(format!("{name}.txt"));
        if update {
            fs::create_dir_all(golden_dir()).unwrap();
            fs::write(&path, &report).unwrap();
        } else if fs::read_to_string(&path).ok().as_deref() != Some(report.as_str()) {
            mismatched.push(*name);
        }
    }
    assert!(mismatched.is_empty(), "reports differ from golden files: {mismatched:?}");
}

#[test]
fn exit_codes_follow_the_verdict() {
    for (name, args, code) in common::MATRIX {
        let out = common::run(args);
        assert_eq!(out.status.code(), Some(*code), "{name}");
        let report = common::stdout(&out);
        let verdict = report.lines().last().unwrap_or_default();
        let expected = if *code == 0 { ["verdict: ok", "verdict: holds"].as_slice() } else { &["verdict: fails"] };
        assert!(expected.contains(&verdict), "{name}: {verdict}");
        assert!(out.stderr.is_empty(), "{name}");
    }
}

#[test]
fn input_errors_exit_with_two() {
    let cases: &[&[&str]] = &[
        &["replicate", "example3"],
        &["eval", "--poly", "x^", "--x", "1"],
        &["eval", "--poly", "x"],
        &["modulus", "--fn", "example1_f.txt", "--r", "2", "--t", "0.5", "--mode", "standard"],
        &["roots", "--poly", "x", "--domain", "[3, -3]"],
        &["check-dcp", "--config", "missing.conf"],
        &["approx", "--fn", "no_such_file.txt", "--n", "3"],
        &["separate", "--strict", "--poly", "x", "--domain", "[-1, 1]", "--x", "0"],
        &["no-such-command"],
    ];
    for args in cases {
        let out = common::run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn quiet_prints_only_the_verdict() {
    for (name, args, _) in common::MATRIX {
        let quiet: Vec<&str> = ["--quiet"].iter().chain(args.iter()).copied().collect();
        let full = common::stdout(&common::run(args));
        let short = common::stdout(&common::run(&quiet));
        assert_eq!(short.lines().count(), 1, "{name}");
        assert_eq!(short.trim_end(), full.lines().last().unwrap(), "{name}");
    }
}

#[test]
fn reports_start_with_the_command_name() {
    for (name, args, _) in common::MATRIX {
        let report = common::stdout(&common::run(args));
        assert_eq!(report.lines().next(), Some(format!("command: {}", args[0]).as_str()), "{name}");
    }
}

#[test]
fn fixed17_and_shortest_agree_numerically() {
    let short = common::stdout(&common::run(&["eval", "--poly", "x^3/3", "--x", "0.1"]));
    let args = fixed17(&["eval", "--poly", "x^3/3", "--x", "0.1"]);
    let long = common::stdout(&common::run(&args.iter().map(String::as_str).collect::<Vec<_>>()));
    assert_eq!(common::number(&short, "value"), common::number(&long, "value"));
}

#[test]
fn replication_rows_carry_their_provenance() {
    let report = common::stdout(&common::run(&["replicate", "example1"]));
    assert!(report.contains("row_13:"));
    assert!(report.contains("+0.78"));
    let report = common::stdout(&common::run(&["replicate", "example2"]));
    assert_eq!(report.matches("pass: false").count(), 2);
}
