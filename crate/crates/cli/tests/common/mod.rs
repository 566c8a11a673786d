#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures")
}

/// Runs the binary from the fixture directory.
pub fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coconvex"))
        .args(args)
        .current_dir(fixtures())
        .output()
        .expect("binary runs")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 report")
}

/// Value of the first `key: value` line, matched after indentation.
pub fn field<'a>(report: &'a str, key: &str) -> Option<&'a str> {
    report.lines().find_map(|l| l.trim_start().strip_prefix(key)?.strip_prefix(": "))
}

pub fn number(report: &str, key: &str) -> f64 {
    field(report, key).unwrap_or_else(|| panic!("no `{key}` in\n{report}")).parse().expect("numeric field")
}

/// Named invocations with their expected exit codes.
pub const MATRIX: &[(&str, &[&str], i32)] = &[
    ("eval", &["eval", "--poly", "0.5*x^2 - x", "--x", "3"], 0),
    ("roots", &["roots", "--poly", "x^4 - 5*x^2 + 4", "--domain", "[-3, 3]"], 0),
    ("inflect", &["inflect", "--poly", "x^4 - 5*x^2 + 4", "--domain", "[-3, 3]"], 0),
    ("preimage", &["preimage", "--poly", "x^2", "--domain", "[-2, 2]", "--target", "[1, 2]"], 0),
    ("modulus_replication", &["modulus", "--fn", "example1_f2_branch.txt", "--k", "2", "--r", "2", "--t", "0.5", "--mode", "replication", "--h", "0.4"], 0),
    ("modulus_standard", &["modulus", "--fn", "example1_f.txt", "--k", "2", "--r", "2", "--t", "0.5", "--mode", "standard"], 0),
    ("convexity_fails", &["convexity", "--fn", "example2_f.txt"], 1),
    ("delta2", &["delta2", "--poly", "x^4 - 5*x^2 + 4", "--domain", "[-3, 3]", "--y=-0.9128709291752769,0.9128709291752769"], 0),
    ("approx", &["approx", "--fn", "example1_f.txt", "--n", "3", "--y", "0"], 0),
    ("jackson", &["jackson", "--fn", "example1_f.txt", "--f2", "example1_f2_branch.txt", "--poly", "0.5*x^2 - x", "--domain", "[-3, 3]", "--n", "3", "--x0", "3", "--k", "2", "--r", "2", "--t", "0.5", "--mode", "replication", "--h", "0.4", "--claimed-c", "7.62"], 0),
    ("check_dcp_example1", &["check-dcp", "--config", "example1_dcp.conf"], 0),
    ("check_dcp_square", &["check-dcp", "--config", "square_dcp.conf"], 0),
    ("check_dccp_example2", &["check-dccp", "--config", "example2_dccp.conf"], 0),
    ("separate_strict", &["separate", "--strict", "--poly", "0.5*x^2 - x", "--domain", "[-3, 3]", "--x", "6"], 0),
    ("separate_support", &["separate", "--support", "--poly", "0.5*x^2 - x", "--domain", "[-3, 3]", "--x", "1", "--alpha", "-0.5"], 0),
    ("separate_strong_all_t", &["separate", "--strong", "--poly", "x^2 + 1", "--domain", "[-1, 1]", "--q", "x", "--domain2", "[-1, 0]", "--hbar", "x", "--t", "all"], 1),
    ("replicate_example1", &["replicate", "example1"], 0),
    ("replicate_example2", &["replicate", "example2"], 1),
];
