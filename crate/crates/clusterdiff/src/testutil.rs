//! Shared fixtures for unit tests: the 16-record worked example that every
//! report and metric value in the documentation traces back to.

use crate::model::{ClusterId, Clustering, ReferenceId, Side};

/// The worked 16-record example: (reference, baseline cluster, counterpart
/// cluster) per row.
///
/// Baseline clusters a-g (7 clusters, singletons a and d); counterpart
/// clusters s-z (8 clusters, singletons s, t, and x).
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

/// Builds a clustering from (reference, cluster) string pairs, panicking on
/// invalid fixture data.
pub fn clustering_from(side: Side, pairs: &[(&str, &str)]) -> Clustering {
    let pairs = pairs.iter().map(|(reference, cluster)| {
        (
            ReferenceId::new(reference).expect("fixture reference id"),
            ClusterId::new(side, cluster).expect("fixture cluster id"),
        )
    });
    Clustering::from_pairs(side, pairs).expect("fixture clustering")
}

/// Both sides of the worked example as ready-made clusterings.
pub fn table1() -> (Clustering, Clustering) {
    let baseline: Vec<(&str, &str)> = TABLE1_ROWS.iter().map(|(r, b, _)| (*r, *b)).collect();
    let counterpart: Vec<(&str, &str)> = TABLE1_ROWS.iter().map(|(r, _, c)| (*r, *c)).collect();
    (
        clustering_from(Side::Baseline, &baseline),
        clustering_from(Side::Counterpart, &counterpart),
    )
}
