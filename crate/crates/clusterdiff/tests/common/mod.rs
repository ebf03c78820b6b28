//! Fixture helpers shared by the integration test targets.

// Each test binary compiles its own copy of this module and uses a subset
// of the helpers.
#![allow(dead_code)]

use clusterdiff::{ClusterId, Clustering, ReferenceId, Side};

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

/// Builds a clustering from (reference, cluster) string pairs.
pub fn clustering_from(side: Side, pairs: &[(&str, &str)]) -> Clustering {
    let pairs = pairs.iter().map(|(reference, cluster)| {
        (
            ReferenceId::new(reference).expect("fixture reference id"),
            ClusterId::new(side, cluster).expect("fixture cluster id"),
        )
    });
    Clustering::from_pairs(side, pairs).expect("fixture clustering")
}

/// Both sides of the worked example.
pub fn table1() -> (Clustering, Clustering) {
    let baseline: Vec<(&str, &str)> = TABLE1_ROWS.iter().map(|(r, b, _)| (*r, *b)).collect();
    let counterpart: Vec<(&str, &str)> = TABLE1_ROWS.iter().map(|(r, _, c)| (*r, *c)).collect();
    (
        clustering_from(Side::Baseline, &baseline),
        clustering_from(Side::Counterpart, &counterpart),
    )
}

/// The worked example as merged CSV text, header included.
pub fn table1_csv() -> String {
    let mut out = String::from("rec_id,er1_cluster,er2_cluster\n");
    for (r, b, c) in TABLE1_ROWS {
        out.push_str(&format!("{r},{b},{c}\n"));
    }
    out
}

/// Builds one clustering from a dense assignment: reference `r{i}` goes to
/// cluster `c{assignment[i]}`.
pub fn from_assignment(side: Side, assignment: &[usize]) -> Clustering {
    let pairs = assignment.iter().enumerate().map(|(i, c)| {
        (
            ReferenceId::new(format!("r{i}")).expect("generated id"),
            ClusterId::new(side, format!("c{c}")).expect("generated id"),
        )
    });
    Clustering::from_pairs(side, pairs).expect("dense assignment is a valid partition")
}
