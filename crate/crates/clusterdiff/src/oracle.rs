//! Independent cross-checks for the classification pipeline.
//!
//! Two kinds of oracle live here. The brute-force functions re-derive case
//! verdicts and intersection counts straight from the set-theoretic
//! definitions, with none of the indexing or size shortcuts the production
//! path uses — slow, but obviously correct, and the tests demand the two
//! agree. The perturbation harness goes the other way: it builds a
//! counterpart by applying a known edit script to a baseline, so the correct
//! case counts are known by construction before any comparison runs.

use std::collections::BTreeSet;

use rand::Rng;

use crate::model::{
    CaseCounts, CaseKind, ClusterId, Clustering, MemberSet, ModelError, ReferenceId, Side,
};

/// Classifies one baseline cluster by literally evaluating the four case
/// definitions over member sets.
///
/// Panics if the inputs are not two partitions of the same reference set,
/// since then no case applies.
pub fn brute_force_classify(
    members: &MemberSet,
    counterpart: &Clustering,
) -> CaseKind {
    let intersecting: Vec<&MemberSet> = counterpart
        .clusters()
        .map(|(_, other)| other)
        .filter(|other| !other.is_disjoint(members))
        .collect();
    match intersecting.as_slice() {
        [] => panic!("cluster shares no reference with the counterpart"),
        [single] => {
            if *single == members {
                CaseKind::Unchanged
            } else if members.is_subset(single) {
                CaseKind::Merged
            } else {
                panic!("counterpart cluster covers this cluster only partially yet is its sole intersection");
            }
        }
        several => {
            let union: MemberSet = several.iter().flat_map(|s| s.iter().cloned()).collect();
            let all_inside = several.iter().all(|s| s.is_subset(members));
            if all_inside && union == *members {
                CaseKind::Partitioned
            } else if members.is_subset(&union) {
                CaseKind::Overlapping
            } else {
                panic!("counterpart clusters fail to cover the cluster");
            }
        }
    }
}

/// Counts non-empty intersections by testing every cluster pair.
///
/// Quadratic in the cluster counts; fine for test-sized inputs.
pub fn brute_force_intersections(baseline: &Clustering, counterpart: &Clustering) -> usize {
    baseline
        .clusters()
        .map(|(_, a)| {
            counterpart
                .clusters()
                .filter(|(_, b)| !a.is_disjoint(b))
                .count()
        })
        .sum()
}

/// One structural edit applied to a baseline clustering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Edit {
    /// Fuse two or more clusters into one.
    Merge(Vec<ClusterId>),
    /// Replace one cluster by the given parts, which must partition it.
    Split {
        cluster: ClusterId,
        parts: Vec<MemberSet>,
    },
    /// Move one reference out of its cluster into another existing cluster.
    /// The source must keep at least one member.
    Move {
        reference: ReferenceId,
        target: ClusterId,
    },
}

impl Edit {
    /// The baseline clusters this edit rewrites.
    fn touched(&self, baseline: &Clustering) -> Vec<ClusterId> {
        match self {
            Edit::Merge(ids) => ids.clone(),
            Edit::Split { cluster, .. } => vec![cluster.clone()],
            Edit::Move { reference, target } => {
                let mut touched = vec![target.clone()];
                if let Some(source) = baseline.cluster_of(reference) {
                    touched.push(source.clone());
                }
                touched
            }
        }
    }
}

/// Errors raised while applying an edit script.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PerturbError {
    /// Two edits touch the same cluster, so the expected case counts would
    /// no longer be well-defined.
    #[error("cluster '{cluster}' is touched by more than one edit")]
    ConflictingEdits { cluster: String },
    /// An edit does not describe a legal transformation of the baseline.
    #[error("invalid edit: {reason}")]
    InvalidEdit { reason: String },
    /// Rebuilding the perturbed clustering failed; indicates a bug in the
    /// harness itself.
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn invalid(reason: impl Into<String>) -> PerturbError {
    PerturbError::InvalidEdit {
        reason: reason.into(),
    }
}

/// Applies an edit script to a baseline, returning the perturbed counterpart
/// together with the forward case counts the script implies.
///
/// Each edit contributes a known verdict: every cluster in a merge becomes
/// merged, a split cluster becomes partitioned, and a move makes the source
/// overlapping and the target merged. Edits must touch disjoint clusters so
/// the contributions stay independent; untouched clusters come out unchanged.
pub fn perturb(
    baseline: &Clustering,
    edits: &[Edit],
) -> Result<(Clustering, CaseCounts), PerturbError> {
    let mut touched: BTreeSet<ClusterId> = BTreeSet::new();
    for edit in edits {
        validate_edit(baseline, edit)?;
        for cluster in edit.touched(baseline) {
            if !touched.insert(cluster.clone()) {
                return Err(PerturbError::ConflictingEdits {
                    cluster: cluster.as_str().to_owned(),
                });
            }
        }
    }

    // Start from a copy of the baseline's assignment, expressed as mutable
    // (cluster name -> members) entries, then rewrite the touched ones.
    let mut expected = CaseCounts::default();
    expected.unchanged = baseline.cluster_count() - touched.len();

    let mut named: Vec<(String, MemberSet)> = Vec::with_capacity(baseline.cluster_count());
    let mut used_names: BTreeSet<String> = baseline
        .clusters()
        .map(|(c, _)| c.as_str().to_owned())
        .collect();
    fn fresh_name(base: String, used: &mut BTreeSet<String>) -> String {
        let mut name = base;
        while !used.insert(name.clone()) {
            name.push('+');
        }
        name
    }

    // Moves reassign a reference between two surviving clusters, so handle
    // them by patching member sets; merges and splits replace whole clusters.
    let mut merged_away: BTreeSet<ClusterId> = BTreeSet::new();
    for edit in edits {
        if let Edit::Merge(ids) = edit {
            let mut union = MemberSet::new();
            for id in ids {
                union.extend(baseline.members_of(id).expect("validated").iter().cloned());
            }
            let base = ids
                .iter()
                .map(|id| id.as_str())
                .collect::<Vec<_>>()
                .join("+");
            named.push((fresh_name(base, &mut used_names), union));
            expected.merged += ids.len();
            merged_away.extend(ids.iter().cloned());
        }
    }

    for (cluster, members) in baseline.clusters() {
        if merged_away.contains(cluster) {
            continue;
        }
        let split = edits.iter().find_map(|edit| match edit {
            Edit::Split { cluster: c, parts } if c == cluster => Some(parts),
            _ => None,
        });
        if let Some(parts) = split {
            for (i, part) in parts.iter().enumerate() {
                let base = format!("{}/{}", cluster.as_str(), i + 1);
                named.push((fresh_name(base, &mut used_names), part.clone()));
            }
            expected.partitioned += 1;
        } else {
            named.push((cluster.as_str().to_owned(), members.clone()));
        }
    }

    for edit in edits {
        if let Edit::Move { reference, target } = edit {
            let source = baseline.cluster_of(reference).expect("validated");
            // The source and target survive under their own names: the edits
            // touch disjoint clusters, so neither was merged or split away.
            for (name, members) in named.iter_mut() {
                if name == source.as_str() {
                    members.remove(reference);
                } else if name == target.as_str() {
                    members.insert(reference.clone());
                }
            }
            // The source lost a member to a cluster that also kept its own
            // members, so it straddles two counterpart clusters; the target
            // grew, swallowing itself plus the newcomer's slice.
            expected.overlapping += 1;
            expected.merged += 1;
        }
    }

    let side = baseline.side().opposite();
    let pairs = named.iter().flat_map(|(name, members)| {
        let cluster = ClusterId::new(side, name).expect("names derive from valid ids");
        members
            .iter()
            .cloned()
            .map(move |reference| (reference, cluster.clone()))
            .collect::<Vec<_>>()
    });
    let counterpart = Clustering::from_pairs(side, pairs)?;
    Ok((counterpart, expected))
}

fn validate_edit(baseline: &Clustering, edit: &Edit) -> Result<(), PerturbError> {
    match edit {
        Edit::Merge(ids) => {
            let distinct: BTreeSet<&ClusterId> = ids.iter().collect();
            if distinct.len() < 2 || distinct.len() != ids.len() {
                return Err(invalid("a merge needs at least two distinct clusters"));
            }
            for id in ids {
                if baseline.members_of(id).is_none() {
                    return Err(invalid(format!(
                        "merge names unknown cluster '{}'",
                        id.as_str()
                    )));
                }
            }
        }
        Edit::Split { cluster, parts } => {
            let members = baseline
                .members_of(cluster)
                .ok_or_else(|| invalid(format!("split names unknown cluster '{}'", cluster.as_str())))?;
            if parts.len() < 2 {
                return Err(invalid("a split needs at least two parts"));
            }
            let mut union = MemberSet::new();
            let mut combined = 0usize;
            for part in parts {
                if part.is_empty() {
                    return Err(invalid("split parts must be non-empty"));
                }
                combined += part.len();
                union.extend(part.iter().cloned());
            }
            if combined != union.len() || union != *members {
                return Err(invalid(format!(
                    "split parts must partition cluster '{}' exactly",
                    cluster.as_str()
                )));
            }
        }
        Edit::Move { reference, target } => {
            let source = baseline
                .cluster_of(reference)
                .ok_or_else(|| invalid(format!("move names unknown reference '{}'", reference.as_str())))?;
            if baseline.members_of(target).is_none() {
                return Err(invalid(format!(
                    "move names unknown target cluster '{}'",
                    target.as_str()
                )));
            }
            if source == target {
                return Err(invalid("move target must differ from the source cluster"));
            }
            if baseline.members_of(source).map(|m| m.len()) == Some(1) {
                return Err(invalid(
                    "moving the last member would empty the source cluster",
                ));
            }
        }
    }
    Ok(())
}

/// Generates a random clustering: `references` references named `r1..`,
/// spread over at most `max_clusters` clusters named `c1..`.
///
/// Every cluster that receives no reference simply does not exist, so the
/// result is always a valid partition.
pub fn random_clustering<R: Rng>(
    rng: &mut R,
    side: Side,
    references: usize,
    max_clusters: usize,
) -> Clustering {
    assert!(references > 0 && max_clusters > 0);
    let k = rng.random_range(1..=max_clusters);
    let pairs = (1..=references).map(|i| {
        let cluster = rng.random_range(1..=k);
        (
            ReferenceId::new(format!("r{i}")).expect("generated id"),
            ClusterId::new(side, format!("c{cluster}")).expect("generated id"),
        )
    });
    Clustering::from_pairs(side, pairs).expect("generated partition is valid")
}

/// Draws a random edit script with up to the requested number of merges,
/// splits, and moves, touching disjoint clusters.
///
/// Counts are best-effort: a baseline with too few (or too small) clusters
/// yields fewer edits than asked for.
pub fn random_edit_script<R: Rng>(
    rng: &mut R,
    baseline: &Clustering,
    merges: usize,
    splits: usize,
    moves: usize,
) -> Vec<Edit> {
    let mut pool: Vec<ClusterId> = baseline.clusters().map(|(c, _)| c.clone()).collect();
    // Shuffle by repeated random removal so edits pick disjoint clusters.
    let mut draw = |pool: &mut Vec<ClusterId>| -> Option<ClusterId> {
        if pool.is_empty() {
            None
        } else {
            let i = rng.random_range(0..pool.len());
            Some(pool.swap_remove(i))
        }
    };

    let mut edits = Vec::new();
    for _ in 0..merges {
        if pool.len() < 2 {
            break;
        }
        let a = draw(&mut pool).expect("pool checked");
        let b = draw(&mut pool).expect("pool checked");
        edits.push(Edit::Merge(vec![a, b]));
    }
    for _ in 0..splits {
        // A split needs a cluster with at least two members.
        let Some(pos) = pool
            .iter()
            .position(|c| baseline.members_of(c).map(|m| m.len()).unwrap_or(0) >= 2)
        else {
            break;
        };
        let cluster = pool.swap_remove(pos);
        let members = baseline.members_of(&cluster).expect("from pool");
        let first: MemberSet = members.iter().take(1).cloned().collect();
        let rest: MemberSet = members.iter().skip(1).cloned().collect();
        edits.push(Edit::Split {
            cluster,
            parts: vec![first, rest],
        });
    }
    for _ in 0..moves {
        // A move needs a source with at least two members plus a distinct target.
        let Some(pos) = pool
            .iter()
            .position(|c| baseline.members_of(c).map(|m| m.len()).unwrap_or(0) >= 2)
        else {
            break;
        };
        if pool.len() < 2 {
            break;
        }
        let source = pool.swap_remove(pos);
        let target = draw(&mut pool).expect("pool still has a target");
        let members = baseline.members_of(&source).expect("from pool");
        let reference = members.iter().next().expect("source has members").clone();
        edits.push(Edit::Move { reference, target });
    }
    edits
}
