//! Domain types for references, clusterings, and comparison results.
//!
//! Identifiers are opaque strings compared by exact, case-sensitive equality;
//! no numeric parsing is ever applied to them. Member sets are kept in
//! lexicographically ascending order so every downstream output is
//! deterministic. All types here are immutable after construction and safe to
//! share across threads.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

/// Errors raised while constructing domain values.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    /// An identifier was empty after trimming surrounding whitespace.
    #[error("{kind} id is blank (empty after trimming surrounding whitespace)")]
    BlankId {
        /// Which kind of id was blank ("reference" or "cluster").
        kind: &'static str,
    },
    /// No pairs were supplied to a clustering builder.
    #[error("no input pairs were provided")]
    EmptyInput,
    /// A reference was assigned to two different clusters.
    #[error("reference '{reference}' is assigned to both cluster '{existing}' and cluster '{conflicting}'")]
    DuplicateReference {
        reference: String,
        existing: String,
        conflicting: String,
    },
    /// The exact same (reference, cluster) pair was supplied twice.
    #[error("pair ('{reference}', '{cluster}') appears more than once")]
    DuplicateRow { reference: String, cluster: String },
    /// A cluster id from one side was used while building the other side.
    #[error("cluster id '{cluster}' belongs to the {actual} side, expected {expected}")]
    SideMismatch {
        cluster: String,
        actual: Side,
        expected: Side,
    },
}

/// Which of the two clustering outcomes an identifier belongs to.
///
/// Cluster ids from different sides are distinct identities even when their
/// strings match, so the two outcomes can reuse names freely.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    /// The first outcome (the paper trail calls this ER1).
    Baseline,
    /// The second outcome (ER2).
    Counterpart,
}

impl Side {
    /// The other side.
    pub fn opposite(self) -> Side {
        match self {
            Side::Baseline => Side::Counterpart,
            Side::Counterpart => Side::Baseline,
        }
    }

    /// Label used in reports: `ER1` for the baseline, `ER2` for the counterpart.
    pub fn report_label(self) -> &'static str {
        match self {
            Side::Baseline => "ER1",
            Side::Counterpart => "ER2",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Baseline => f.write_str("baseline"),
            Side::Counterpart => f.write_str("counterpart"),
        }
    }
}

/// Opaque identifier of a single reference (record).
///
/// Compared by exact, case-sensitive string equality. Surrounding whitespace
/// is trimmed on construction; an id that is blank after trimming is invalid.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ReferenceId(String);

impl ReferenceId {
    /// Builds a reference id, trimming surrounding whitespace.
    pub fn new(value: impl AsRef<str>) -> Result<Self, ModelError> {
        let trimmed = value.as_ref().trim();
        if trimmed.is_empty() {
            return Err(ModelError::BlankId { kind: "reference" });
        }
        Ok(Self(trimmed.to_owned()))
    }

    /// The id as a string slice.
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ReferenceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Identifier of one cluster within one clustering outcome.
///
/// The side is part of the identity: baseline cluster `x` and counterpart
/// cluster `x` are different clusters even though their strings match.
/// Ordering is by side, then lexicographically by value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClusterId {
    side: Side,
    value: String,
}

impl ClusterId {
    /// Builds a cluster id for the given side, trimming surrounding whitespace.
    pub fn new(side: Side, value: impl AsRef<str>) -> Result<Self, ModelError> {
        let trimmed = value.as_ref().trim();
        if trimmed.is_empty() {
            return Err(ModelError::BlankId { kind: "cluster" });
        }
        Ok(Self {
            side,
            value: trimmed.to_owned(),
        })
    }

    /// Which clustering this id belongs to.
    pub fn side(&self) -> Side {
        self.side
    }

    /// The id as a string slice, without the side.
    pub fn as_str(&self) -> &str {
        &self.value
    }
}

impl fmt::Display for ClusterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Sorted set of references, the stored form of one cluster's members.
pub type MemberSet = BTreeSet<ReferenceId>;

/// A total partition of a reference set, indexed in both directions.
///
/// Every reference belongs to exactly one cluster, no cluster is empty, and
/// the member index is the exact inverse of the assignment map. Instances are
/// immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clustering {
    side: Side,
    assignment: HashMap<ReferenceId, ClusterId>,
    members: BTreeMap<ClusterId, MemberSet>,
}

impl Clustering {
    /// Builds a clustering from (reference, cluster) pairs.
    ///
    /// The result does not depend on the order of the pairs. Conflicting
    /// assignments and exact duplicate pairs are both rejected; callers that
    /// want to tolerate duplicates must deduplicate first (see the ingest
    /// module's lenient mode).
    pub fn from_pairs(
        side: Side,
        pairs: impl IntoIterator<Item = (ReferenceId, ClusterId)>,
    ) -> Result<Self, ModelError> {
        let mut assignment: HashMap<ReferenceId, ClusterId> = HashMap::new();
        let mut members: BTreeMap<ClusterId, MemberSet> = BTreeMap::new();
        for (reference, cluster) in pairs {
            if cluster.side() != side {
                return Err(ModelError::SideMismatch {
                    cluster: cluster.as_str().to_owned(),
                    actual: cluster.side(),
                    expected: side,
                });
            }
            match assignment.get(&reference) {
                Some(existing) if *existing == cluster => {
                    return Err(ModelError::DuplicateRow {
                        reference: reference.as_str().to_owned(),
                        cluster: cluster.as_str().to_owned(),
                    });
                }
                Some(existing) => {
                    return Err(ModelError::DuplicateReference {
                        reference: reference.as_str().to_owned(),
                        existing: existing.as_str().to_owned(),
                        conflicting: cluster.as_str().to_owned(),
                    });
                }
                None => {
                    members
                        .entry(cluster.clone())
                        .or_default()
                        .insert(reference.clone());
                    assignment.insert(reference, cluster);
                }
            }
        }
        if assignment.is_empty() {
            return Err(ModelError::EmptyInput);
        }
        Ok(Self {
            side,
            assignment,
            members,
        })
    }

    /// Which outcome this clustering represents.
    pub fn side(&self) -> Side {
        self.side
    }

    /// Number of references in the partition.
    pub fn reference_count(&self) -> usize {
        self.assignment.len()
    }

    /// Number of clusters.
    pub fn cluster_count(&self) -> usize {
        self.members.len()
    }

    /// Number of clusters containing exactly one reference.
    pub fn singleton_count(&self) -> usize {
        self.members.values().filter(|m| m.len() == 1).count()
    }

    /// Clusters with their member sets, ascending by cluster id.
    pub fn clusters(&self) -> impl Iterator<Item = (&ClusterId, &MemberSet)> {
        self.members.iter()
    }

    /// The member set of one cluster, if the cluster exists.
    pub fn members_of(&self, cluster: &ClusterId) -> Option<&MemberSet> {
        self.members.get(cluster)
    }

    /// The cluster a reference belongs to, if the reference exists.
    pub fn cluster_of(&self, reference: &ReferenceId) -> Option<&ClusterId> {
        self.assignment.get(reference)
    }

    /// Whether the reference is part of this clustering's reference set.
    pub fn contains_reference(&self, reference: &ReferenceId) -> bool {
        self.assignment.contains_key(reference)
    }

    /// True when both clusterings partition the identical reference set.
    pub fn same_reference_set(&self, other: &Clustering) -> bool {
        self.assignment.len() == other.assignment.len()
            && self
                .assignment
                .keys()
                .all(|r| other.assignment.contains_key(r))
    }
}

/// Headline counts describing a comparison's inputs: reference count plus
/// cluster and singleton counts per side (the report columns RC, CC1, SC1,
/// CC2, SC2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Profile {
    /// Count of references in the shared reference set (RC).
    pub references: usize,
    /// Count of baseline clusters (CC1).
    pub baseline_clusters: usize,
    /// Count of baseline clusters with exactly one member (SC1).
    pub baseline_singletons: usize,
    /// Count of counterpart clusters (CC2).
    pub counterpart_clusters: usize,
    /// Count of counterpart clusters with exactly one member (SC2).
    pub counterpart_singletons: usize,
}

/// Orientation of a classification pass.
///
/// Forward classifies baseline clusters against the counterpart (report
/// cases 1-4); reverse swaps the roles (cases 5-8).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Reverse,
}

/// The four mutually exclusive ways a baseline cluster can relate to the
/// counterpart clustering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CaseKind {
    /// An identical cluster exists in the counterpart.
    Unchanged,
    /// The cluster is a strict subset of one counterpart cluster.
    Merged,
    /// The cluster is decomposed into two or more counterpart clusters, all
    /// of them strict subsets of it.
    Partitioned,
    /// The cluster intersects two or more counterpart clusters and at least
    /// one of them reaches outside the cluster.
    Overlapping,
}

impl CaseKind {
    /// All kinds in report order.
    pub const ALL: [CaseKind; 4] = [
        CaseKind::Unchanged,
        CaseKind::Merged,
        CaseKind::Partitioned,
        CaseKind::Overlapping,
    ];

    /// Human-readable name, as printed in reports.
    pub fn label(self) -> &'static str {
        match self {
            CaseKind::Unchanged => "Unchanged",
            CaseKind::Merged => "Merged",
            CaseKind::Partitioned => "Partitioned",
            CaseKind::Overlapping => "Overlapping",
        }
    }

    /// Report case number: 1-4 forward, 5-8 reverse.
    pub fn case_number(self, direction: Direction) -> u8 {
        let base = match self {
            CaseKind::Unchanged => 1,
            CaseKind::Merged => 2,
            CaseKind::Partitioned => 3,
            CaseKind::Overlapping => 4,
        };
        match direction {
            Direction::Forward => base,
            Direction::Reverse => base + 4,
        }
    }
}

impl fmt::Display for CaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for CaseKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "unchanged" => Ok(CaseKind::Unchanged),
            "merged" => Ok(CaseKind::Merged),
            "partitioned" => Ok(CaseKind::Partitioned),
            "overlapping" => Ok(CaseKind::Overlapping),
            other => Err(format!(
                "unknown case '{other}' (expected unchanged, merged, partitioned, or overlapping)"
            )),
        }
    }
}

/// Verdict for one baseline cluster, with the evidence that produced it: the
/// counterpart clusters it intersects and the members of each intersection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseClassification {
    baseline_cluster: ClusterId,
    kind: CaseKind,
    intersections: BTreeMap<ClusterId, MemberSet>,
}

impl CaseClassification {
    pub(crate) fn new(
        baseline_cluster: ClusterId,
        kind: CaseKind,
        intersections: BTreeMap<ClusterId, MemberSet>,
    ) -> Self {
        debug_assert!(!intersections.is_empty());
        debug_assert!(intersections.values().all(|m| !m.is_empty()));
        Self {
            baseline_cluster,
            kind,
            intersections,
        }
    }

    /// The classified cluster.
    pub fn baseline_cluster(&self) -> &ClusterId {
        &self.baseline_cluster
    }

    /// The verdict.
    pub fn kind(&self) -> CaseKind {
        self.kind
    }

    /// The counterpart clusters with a non-empty intersection, ascending.
    pub fn counterpart_clusters(&self) -> impl Iterator<Item = &ClusterId> {
        self.intersections.keys()
    }

    /// Intersection members per counterpart cluster.
    pub fn intersections(&self) -> &BTreeMap<ClusterId, MemberSet> {
        &self.intersections
    }
}

/// How many baseline clusters fell into each of the four cases.
///
/// The four counts always sum to the number of baseline clusters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CaseCounts {
    pub unchanged: usize,
    pub merged: usize,
    pub partitioned: usize,
    pub overlapping: usize,
}

impl CaseCounts {
    /// Count for one kind.
    pub fn get(&self, kind: CaseKind) -> usize {
        match kind {
            CaseKind::Unchanged => self.unchanged,
            CaseKind::Merged => self.merged,
            CaseKind::Partitioned => self.partitioned,
            CaseKind::Overlapping => self.overlapping,
        }
    }

    /// Increment the count for one kind.
    pub fn record(&mut self, kind: CaseKind) {
        match kind {
            CaseKind::Unchanged => self.unchanged += 1,
            CaseKind::Merged => self.merged += 1,
            CaseKind::Partitioned => self.partitioned += 1,
            CaseKind::Overlapping => self.overlapping += 1,
        }
    }

    /// Sum of the four counts.
    pub fn total(&self) -> usize {
        self.unchanged + self.merged + self.partitioned + self.overlapping
    }
}

/// Everything one comparison produces: profile counts, classifications and
/// case counts in both directions, the intersection count, the TWI value at
/// full precision, and the singleton clusters of each side.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonResult {
    pub profile: Profile,
    /// Case counts with the baseline as primary (cases 1-4).
    pub forward: CaseCounts,
    /// Case counts with the counterpart as primary (cases 5-8).
    pub reverse: CaseCounts,
    /// One verdict per baseline cluster, ascending by cluster id.
    pub forward_classifications: Vec<CaseClassification>,
    /// One verdict per counterpart cluster, ascending by cluster id.
    pub reverse_classifications: Vec<CaseClassification>,
    /// Count of non-empty intersections between the two sides (|V|).
    pub intersection_count: usize,
    /// sqrt(CC1 * CC2) / |V|, in (0, 1]; 1 exactly when the outcomes match.
    pub twi: f64,
    /// Baseline singleton clusters, ascending.
    pub singletons_baseline: Vec<ClusterId>,
    /// Counterpart singleton clusters, ascending.
    pub singletons_counterpart: Vec<ClusterId>,
}

impl ComparisonResult {
    /// True when the two outcomes formed exactly the same clusters.
    pub fn is_identical(&self) -> bool {
        self.forward.unchanged == self.profile.baseline_clusters
            && self.profile.baseline_clusters == self.profile.counterpart_clusters
    }
}

/// One comparison summarized as a parameter-sweep table row, in the table's
/// column order: label, CC1, SC1, UC, MC, PC, OC, CC2, SC2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRow {
    /// Row key, typically the varied parameter value or the variant file stem.
    pub label: String,
    pub baseline_clusters: usize,
    pub baseline_singletons: usize,
    pub cases: CaseCounts,
    pub counterpart_clusters: usize,
    pub counterpart_singletons: usize,
}

impl SweepRow {
    /// Summarizes a comparison under the given row label.
    pub fn from_result(label: impl Into<String>, result: &ComparisonResult) -> Self {
        Self {
            label: label.into(),
            baseline_clusters: result.profile.baseline_clusters,
            baseline_singletons: result.profile.baseline_singletons,
            cases: result.forward,
            counterpart_clusters: result.profile.counterpart_clusters,
            counterpart_singletons: result.profile.counterpart_singletons,
        }
    }

    /// True when the variant reproduced the baseline exactly (every cluster
    /// unchanged), which is the row a sweep report flags.
    pub fn matches_baseline(&self) -> bool {
        self.cases.unchanged == self.baseline_clusters
            && self.baseline_clusters == self.counterpart_clusters
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{clustering_from, table1, TABLE1_ROWS};

    fn rid(s: &str) -> ReferenceId {
        ReferenceId::new(s).unwrap()
    }

    fn cid(side: Side, s: &str) -> ClusterId {
        ClusterId::new(side, s).unwrap()
    }

    #[test]
    fn ids_trim_and_reject_blank() {
        assert_eq!(rid("  1 ").as_str(), "1");
        assert_eq!(
            ReferenceId::new("   "),
            Err(ModelError::BlankId { kind: "reference" })
        );
        assert_eq!(
            ClusterId::new(Side::Baseline, "\t"),
            Err(ModelError::BlankId { kind: "cluster" })
        );
    }

    #[test]
    fn reference_ids_are_case_sensitive() {
        assert_ne!(rid("A1"), rid("a1"));
    }

    #[test]
    fn cluster_ids_from_different_sides_never_match() {
        let base = cid(Side::Baseline, "x");
        let counter = cid(Side::Counterpart, "x");
        assert_ne!(base, counter);
        assert_eq!(base.as_str(), counter.as_str());
    }

    #[test]
    fn table1_baseline_has_seven_clusters() {
        let (baseline, counterpart) = table1();
        assert_eq!(baseline.cluster_count(), 7);
        assert_eq!(baseline.reference_count(), 16);
        assert_eq!(counterpart.cluster_count(), 8);
        let names: Vec<&str> = baseline.clusters().map(|(c, _)| c.as_str()).collect();
        assert_eq!(names, ["a", "b", "c", "d", "e", "f", "g"]);
    }

    #[test]
    fn single_pair_builds_singleton_universe() {
        let clustering = clustering_from(Side::Baseline, &[("1", "a")]);
        assert_eq!(clustering.cluster_count(), 1);
        assert_eq!(clustering.reference_count(), 1);
        assert_eq!(clustering.singleton_count(), 1);
    }

    #[test]
    fn build_is_order_independent() {
        let pairs = [
            ("r1", "c1"),
            ("r2", "c2"),
            ("r3", "c1"),
            ("r4", "c3"),
            ("r5", "c2"),
            ("r6", "c4"),
            ("r7", "c1"),
            ("r8", "c4"),
            ("r9", "c3"),
            ("r10", "c2"),
        ];
        let mut reversed = pairs;
        reversed.reverse();
        let forward = clustering_from(Side::Baseline, &pairs);
        let backward = clustering_from(Side::Baseline, &reversed);
        assert_eq!(forward, backward);
    }

    #[test]
    fn conflicting_assignment_is_rejected() {
        let pairs = vec![
            (rid("1"), cid(Side::Baseline, "a")),
            (rid("1"), cid(Side::Baseline, "b")),
        ];
        assert_eq!(
            Clustering::from_pairs(Side::Baseline, pairs),
            Err(ModelError::DuplicateReference {
                reference: "1".into(),
                existing: "a".into(),
                conflicting: "b".into(),
            })
        );
    }

    #[test]
    fn exact_duplicate_pair_is_rejected() {
        let pairs = vec![
            (rid("1"), cid(Side::Baseline, "a")),
            (rid("1"), cid(Side::Baseline, "a")),
        ];
        assert_eq!(
            Clustering::from_pairs(Side::Baseline, pairs),
            Err(ModelError::DuplicateRow {
                reference: "1".into(),
                cluster: "a".into(),
            })
        );
    }

    #[test]
    fn empty_input_is_rejected() {
        assert_eq!(
            Clustering::from_pairs(Side::Baseline, Vec::new()),
            Err(ModelError::EmptyInput)
        );
    }

    #[test]
    fn wrong_side_cluster_is_rejected() {
        let pairs = vec![(rid("1"), cid(Side::Counterpart, "a"))];
        assert!(matches!(
            Clustering::from_pairs(Side::Baseline, pairs),
            Err(ModelError::SideMismatch { .. })
        ));
    }

    #[test]
    fn member_index_inverts_assignment() {
        let (baseline, _) = table1();
        for (reference, ..) in TABLE1_ROWS {
            let r = rid(reference);
            let cluster = baseline.cluster_of(&r).unwrap();
            assert!(baseline.members_of(cluster).unwrap().contains(&r));
        }
    }

    #[test]
    fn case_numbers_follow_report_layout() {
        assert_eq!(CaseKind::Unchanged.case_number(Direction::Forward), 1);
        assert_eq!(CaseKind::Overlapping.case_number(Direction::Forward), 4);
        assert_eq!(CaseKind::Unchanged.case_number(Direction::Reverse), 5);
        assert_eq!(CaseKind::Merged.case_number(Direction::Reverse), 6);
    }

    #[test]
    fn case_kind_parses_case_insensitively() {
        assert_eq!("Merged".parse::<CaseKind>(), Ok(CaseKind::Merged));
        assert_eq!(" overlapping ".parse::<CaseKind>(), Ok(CaseKind::Overlapping));
        assert!("merge".parse::<CaseKind>().is_err());
    }
}
