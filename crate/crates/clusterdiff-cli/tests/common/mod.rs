//! Fixture files and binary-invocation helpers shared by the integration
//! test targets.

// Each test binary compiles its own copy of this module and uses a subset
// of the helpers.
#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

/// The 16-record worked example: (reference, baseline cluster, counterpart
/// cluster) per row.
pub const TABLE1_ROWS: [(&str, &str, &str); 16] = [
    ("1", "a", "x"),
    ("2", "b", "y"),
    ("3", "b", "y"),
    ("4", "c", "z"),
    ("5", "c", "z"),
    ("6", "c", "z"),
    ("7", "d", "z"),
    ("8", "e", "w"),
    ("9", "e", "w"),
    ("10", "e", "t"),
    ("11", "f", "u"),
    ("12", "f", "u"),
    ("13", "f", "v"),
    ("14", "g", "u"),
    ("15", "g", "v"),
    ("16", "g", "s"),
];

/// The worked example as a merged three-column CSV file body.
pub fn table1_merged_csv() -> String {
    let mut out = String::from("rec_id,er1_cluster,er2_cluster\n");
    for (reference, baseline, counterpart) in TABLE1_ROWS {
        out.push_str(&format!("{reference},{baseline},{counterpart}\n"));
    }
    out
}

/// The worked example as two single-clustering CSV file bodies.
pub fn table1_split_csv() -> (String, String) {
    let mut er1 = String::from("rec_id,cluster\n");
    let mut er2 = String::from("rec_id,cluster\n");
    for (reference, baseline, counterpart) in TABLE1_ROWS {
        er1.push_str(&format!("{reference},{baseline}\n"));
        er2.push_str(&format!("{reference},{counterpart}\n"));
    }
    (er1, er2)
}

/// Writes `content` under `dir` and returns the path.
pub fn write_file(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, content).unwrap();
    path
}

/// Writes the merged worked-example fixture under `dir`.
pub fn write_table1_merged(dir: &Path) -> PathBuf {
    write_file(dir, "table1.csv", &table1_merged_csv())
}

/// Writes the split worked-example fixtures under `dir`.
pub fn write_table1_split(dir: &Path) -> (PathBuf, PathBuf) {
    let (er1, er2) = table1_split_csv();
    (
        write_file(dir, "er1.csv", &er1),
        write_file(dir, "er2.csv", &er2),
    )
}

/// Runs the compiled `clusterdiff` binary with `args` and returns the
/// captured output.
pub fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clusterdiff"))
        .args(args)
        .output()
        .expect("binary runs")
}

/// Captured stdout as UTF-8.
pub fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

/// Captured stderr as UTF-8.
pub fn stderr_of(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).unwrap()
}
