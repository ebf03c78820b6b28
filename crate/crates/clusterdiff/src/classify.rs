//! Case classification: decide, for every baseline cluster, how the
//! counterpart clustering transformed it.
//!
//! The decision needs only the overlap structure between the two partitions,
//! which a single pass over the references builds in O(RC + V) time (V being
//! the number of non-empty intersections). Because both sides are total
//! partitions of one reference set, the verdict for a cluster follows from
//! size arithmetic alone — no set comparisons are needed:
//!
//! * one intersecting counterpart cluster of equal size: **unchanged**;
//! * one intersecting counterpart cluster, necessarily larger: **merged**;
//! * several intersecting clusters whose sizes sum to the cluster's own
//!   size (so each lies fully inside it): **partitioned**;
//! * several intersecting clusters, at least one escaping: **overlapping**.

use std::collections::BTreeMap;

use crate::model::{
    CaseClassification, CaseCounts, CaseKind, ClusterId, Clustering, MemberSet,
};

/// Errors raised while classifying.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    /// The two clusterings do not cover the same references, so overlap
    /// analysis would be meaningless. Ingest normally guarantees alignment;
    /// this guards hand-built inputs.
    #[error("clusterings cover different reference sets ({baseline_references} baseline vs {counterpart_references} counterpart references)")]
    ReferenceSetMismatch {
        baseline_references: usize,
        counterpart_references: usize,
    },
}

/// The overlap structure of two partitions: for every baseline cluster, the
/// counterpart clusters it intersects and the shared members.
///
/// Only non-empty intersections are stored, so the total entry count is the
/// |V| that the TWI metric divides by.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlapIndex {
    rows: BTreeMap<ClusterId, BTreeMap<ClusterId, MemberSet>>,
    total: usize,
}

impl OverlapIndex {
    /// Count of non-empty intersections across all baseline clusters (|V|).
    pub fn intersection_count(&self) -> usize {
        self.total
    }

    /// The intersections of each baseline cluster, ascending by cluster id.
    pub fn rows(&self) -> impl Iterator<Item = (&ClusterId, &BTreeMap<ClusterId, MemberSet>)> {
        self.rows.iter()
    }

    pub(crate) fn into_rows(self) -> BTreeMap<ClusterId, BTreeMap<ClusterId, MemberSet>> {
        self.rows
    }
}

/// Builds the overlap index in one pass over the baseline's members.
///
/// Every reference contributes to exactly one (baseline, counterpart) pair,
/// so the pass is O(RC) lookups plus O(V) map entries.
pub fn build_overlap_index(
    baseline: &Clustering,
    counterpart: &Clustering,
) -> Result<OverlapIndex, ClassifyError> {
    if !baseline.same_reference_set(counterpart) {
        return Err(ClassifyError::ReferenceSetMismatch {
            baseline_references: baseline.reference_count(),
            counterpart_references: counterpart.reference_count(),
        });
    }
    let mut rows: BTreeMap<ClusterId, BTreeMap<ClusterId, MemberSet>> = BTreeMap::new();
    for (cluster, members) in baseline.clusters() {
        let row = rows.entry(cluster.clone()).or_default();
        for reference in members {
            let other = counterpart
                .cluster_of(reference)
                .expect("reference sets verified equal");
            row.entry(other.clone())
                .or_default()
                .insert(reference.clone());
        }
    }
    let total = rows.values().map(|row| row.len()).sum();
    Ok(OverlapIndex { rows, total })
}

/// Classifies one baseline cluster from its overlap row.
///
/// `members` must be the cluster's full member set and `row` its non-empty
/// intersections as built by [`build_overlap_index`]; the row is moved into
/// the returned classification as evidence.
pub fn classify_cluster(
    baseline_cluster: &ClusterId,
    members: &MemberSet,
    row: BTreeMap<ClusterId, MemberSet>,
    counterpart: &Clustering,
) -> CaseClassification {
    debug_assert_eq!(
        members.len(),
        row.values().map(|m| m.len()).sum::<usize>(),
        "intersections of a partition must cover the cluster"
    );
    let counterpart_size = |id: &ClusterId| {
        counterpart
            .members_of(id)
            .map(|m| m.len())
            .expect("intersecting cluster exists in counterpart")
    };
    let kind = if row.len() == 1 {
        let other = row.keys().next().expect("row has one entry");
        if counterpart_size(other) == members.len() {
            // Same members on both sides: the containing counterpart cluster
            // has nothing beyond this cluster and covers all of it.
            CaseKind::Unchanged
        } else {
            CaseKind::Merged
        }
    } else {
        let combined: usize = row.keys().map(counterpart_size).sum();
        if combined == members.len() {
            // Every intersecting counterpart cluster lies fully inside this
            // cluster, and together they tile it exactly.
            CaseKind::Partitioned
        } else {
            CaseKind::Overlapping
        }
    };
    CaseClassification::new(baseline_cluster.clone(), kind, row)
}

/// Classifies every baseline cluster against the counterpart.
///
/// Returns the per-cluster verdicts (ascending by cluster id) and the case
/// counts, whose total always equals the baseline's cluster count.
pub fn classify_all(
    baseline: &Clustering,
    counterpart: &Clustering,
) -> Result<(Vec<CaseClassification>, CaseCounts), ClassifyError> {
    let index = build_overlap_index(baseline, counterpart)?;
    let mut classifications = Vec::with_capacity(baseline.cluster_count());
    let mut counts = CaseCounts::default();
    for (cluster, row) in index.into_rows() {
        let members = baseline
            .members_of(&cluster)
            .expect("index rows come from baseline clusters");
        let classification = classify_cluster(&cluster, members, row, counterpart);
        counts.record(classification.kind());
        classifications.push(classification);
    }
    Ok((classifications, counts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Side;
    use crate::testutil::{clustering_from, table1};

    fn verdict_of(clusterings: &(Clustering, Clustering), cluster: &str) -> CaseKind {
        let (baseline, counterpart) = clusterings;
        let (classifications, _) = classify_all(baseline, counterpart).unwrap();
        classifications
            .iter()
            .find(|c| c.baseline_cluster().as_str() == cluster)
            .expect("cluster present")
            .kind()
    }

    #[test]
    fn worked_example_forward_counts() {
        let (baseline, counterpart) = table1();
        let (classifications, counts) = classify_all(&baseline, &counterpart).unwrap();
        assert_eq!(classifications.len(), 7);
        assert_eq!(counts.unchanged, 2);
        assert_eq!(counts.merged, 2);
        assert_eq!(counts.partitioned, 1);
        assert_eq!(counts.overlapping, 2);
        assert_eq!(counts.total(), baseline.cluster_count());
    }

    #[test]
    fn worked_example_reverse_counts() {
        let (baseline, counterpart) = table1();
        let (classifications, counts) = classify_all(&counterpart, &baseline).unwrap();
        assert_eq!(classifications.len(), 8);
        assert_eq!(counts.unchanged, 2);
        assert_eq!(counts.merged, 3);
        assert_eq!(counts.partitioned, 1);
        assert_eq!(counts.overlapping, 2);
    }

    #[test]
    fn worked_example_per_cluster_verdicts() {
        let pair = table1();
        // {1} appears identically as {1} on the other side.
        assert_eq!(verdict_of(&pair, "a"), CaseKind::Unchanged);
        assert_eq!(verdict_of(&pair, "b"), CaseKind::Unchanged);
        // {4,5,6} was absorbed into z = {4,5,6,7}.
        assert_eq!(verdict_of(&pair, "c"), CaseKind::Merged);
        assert_eq!(verdict_of(&pair, "d"), CaseKind::Merged);
        // {8,9,10} was split into w = {8,9} and t = {10}.
        assert_eq!(verdict_of(&pair, "e"), CaseKind::Partitioned);
        // {11,12,13} meets u and v but both reach into g as well.
        assert_eq!(verdict_of(&pair, "f"), CaseKind::Overlapping);
        assert_eq!(verdict_of(&pair, "g"), CaseKind::Overlapping);
    }

    #[test]
    fn worked_example_intersection_count() {
        let (baseline, counterpart) = table1();
        let index = build_overlap_index(&baseline, &counterpart).unwrap();
        assert_eq!(index.intersection_count(), 11);
        // Building from the other side must see the same overlap structure.
        let reversed = build_overlap_index(&counterpart, &baseline).unwrap();
        assert_eq!(reversed.intersection_count(), 11);
    }

    #[test]
    fn index_stores_shared_members() {
        let (baseline, counterpart) = table1();
        let index = build_overlap_index(&baseline, &counterpart).unwrap();
        let (cluster, row) = index
            .rows()
            .find(|(c, _)| c.as_str() == "e")
            .expect("cluster e");
        assert_eq!(cluster.as_str(), "e");
        let shares: Vec<(&str, Vec<&str>)> = row
            .iter()
            .map(|(other, members)| {
                (
                    other.as_str(),
                    members.iter().map(|r| r.as_str()).collect(),
                )
            })
            .collect();
        assert_eq!(shares, [("t", vec!["10"]), ("w", vec!["8", "9"])]);
    }

    #[test]
    fn identical_clusterings_are_all_unchanged() {
        let rows = [("1", "a"), ("2", "a"), ("3", "b")];
        let baseline = clustering_from(Side::Baseline, &rows);
        let counterpart = clustering_from(Side::Counterpart, &rows);
        let (_, counts) = classify_all(&baseline, &counterpart).unwrap();
        assert_eq!(counts.unchanged, 2);
        assert_eq!(counts.total(), 2);
    }

    #[test]
    fn mismatched_reference_sets_are_rejected() {
        let baseline = clustering_from(Side::Baseline, &[("1", "a"), ("2", "a")]);
        let counterpart = clustering_from(Side::Counterpart, &[("1", "a"), ("3", "a")]);
        assert_eq!(
            classify_all(&baseline, &counterpart),
            Err(ClassifyError::ReferenceSetMismatch {
                baseline_references: 2,
                counterpart_references: 2,
            })
        );
    }

    #[test]
    fn equal_sizes_with_different_members_are_not_unchanged() {
        // b = {2,3} vs y = {3,4}: same size, different members. The overlap
        // row for b has two entries (y and whatever holds 2), so size
        // arithmetic alone cannot mistake it for unchanged.
        let baseline = clustering_from(Side::Baseline, &[("1", "a"), ("2", "b"), ("3", "b"), ("4", "c")]);
        let counterpart =
            clustering_from(Side::Counterpart, &[("1", "x"), ("2", "x"), ("3", "y"), ("4", "y")]);
        let (classifications, counts) = classify_all(&baseline, &counterpart).unwrap();
        assert_eq!(counts.unchanged, 0);
        assert_eq!(
            classifications
                .iter()
                .find(|c| c.baseline_cluster().as_str() == "b")
                .unwrap()
                .kind(),
            CaseKind::Overlapping
        );
    }
}
