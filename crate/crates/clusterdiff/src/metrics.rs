//! Profile counts, singleton lists, the TWI similarity metric, and the
//! top-level comparison entry point.

use crate::classify::{classify_all, ClassifyError};
use crate::model::{ClusterId, Clustering, ComparisonResult, Profile};

/// Errors raised while computing metrics.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricsError {
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    /// The (cc1, cc2, intersections) triple cannot come from two partitions
    /// of one reference set, so the TWI value would be meaningless.
    #[error("impossible overlap count: {intersections} non-empty intersections for {baseline_clusters} baseline and {counterpart_clusters} counterpart clusters")]
    Domain {
        baseline_clusters: usize,
        counterpart_clusters: usize,
        intersections: usize,
    },
}

/// Collects the headline counts of a comparison's two inputs.
pub fn compute_profile(baseline: &Clustering, counterpart: &Clustering) -> Profile {
    Profile {
        references: baseline.reference_count(),
        baseline_clusters: baseline.cluster_count(),
        baseline_singletons: baseline.singleton_count(),
        counterpart_clusters: counterpart.cluster_count(),
        counterpart_singletons: counterpart.singleton_count(),
    }
}

/// The clusters with exactly one member, ascending by cluster id.
pub fn list_singletons(clustering: &Clustering) -> Vec<ClusterId> {
    clustering
        .clusters()
        .filter(|(_, members)| members.len() == 1)
        .map(|(cluster, _)| cluster.clone())
        .collect()
}

/// Talburt-Wang index: sqrt(cc1 * cc2) / intersections.
///
/// `intersections` is the count of non-empty pairwise intersections between
/// the two clusterings. For two partitions of one reference set the value is
/// always in (0, 1]: each side contributes at least one intersection per
/// cluster, so `intersections >= max(cc1, cc2) >= sqrt(cc1 * cc2)`. Exactly
/// 1.0 means the clusterings are identical; the minimum for an N-reference
/// set is 1/sqrt(N), reached when one side keeps everything apart and the
/// other lumps everything together.
pub fn compute_twi(
    baseline_clusters: usize,
    counterpart_clusters: usize,
    intersections: usize,
) -> Result<f64, MetricsError> {
    let floor = baseline_clusters.max(counterpart_clusters);
    if baseline_clusters == 0 || counterpart_clusters == 0 || intersections < floor {
        return Err(MetricsError::Domain {
            baseline_clusters,
            counterpart_clusters,
            intersections,
        });
    }
    let product = (baseline_clusters as f64) * (counterpart_clusters as f64);
    Ok(product.sqrt() / (intersections as f64))
}

/// Runs a full comparison: classifies both directions, counts the non-empty
/// intersections, and computes profile, singleton lists, and TWI.
///
/// The two clusterings must cover the same reference set.
pub fn compare(
    baseline: &Clustering,
    counterpart: &Clustering,
) -> Result<ComparisonResult, MetricsError> {
    let (forward_classifications, forward) = classify_all(baseline, counterpart)?;
    let (reverse_classifications, reverse) = classify_all(counterpart, baseline)?;

    // |V| is direction-free: a non-empty intersection between cluster A and
    // cluster B is one edge regardless of which side is primary.
    let intersection_count: usize = forward_classifications
        .iter()
        .map(|c| c.intersections().len())
        .sum();
    debug_assert_eq!(
        intersection_count,
        reverse_classifications
            .iter()
            .map(|c| c.intersections().len())
            .sum::<usize>(),
        "both directions must see the same intersection structure"
    );
    // A cluster is unchanged exactly when its twin on the other side is, so
    // the two directions always agree on this one count.
    debug_assert_eq!(forward.unchanged, reverse.unchanged);

    let profile = compute_profile(baseline, counterpart);
    let twi = compute_twi(
        profile.baseline_clusters,
        profile.counterpart_clusters,
        intersection_count,
    )?;

    Ok(ComparisonResult {
        profile,
        forward,
        reverse,
        forward_classifications,
        reverse_classifications,
        intersection_count,
        twi,
        singletons_baseline: list_singletons(baseline),
        singletons_counterpart: list_singletons(counterpart),
    })
}
