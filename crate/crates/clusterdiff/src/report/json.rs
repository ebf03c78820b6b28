//! Machine-readable export: one JSON document per comparison, holding the
//! profile, both directions' counts and classifications, the TWI, and
//! ready-to-plot chart series.
//!
//! The document round-trips losslessly: parsing it and serializing the
//! parsed value reproduces the original bytes. Key order is the struct
//! field order below, map keys are sorted, and TWI is rounded half-up to
//! four decimal places at export.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::model::{
    CaseClassification, CaseCounts, CaseKind, ComparisonResult, Direction,
};

/// Headline counts section.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileSection {
    /// Reference count.
    pub rc: usize,
    /// Baseline (ER1) cluster count.
    pub cc1: usize,
    /// Baseline singleton count.
    pub sc1: usize,
    /// Counterpart (ER2) cluster count.
    pub cc2: usize,
    /// Counterpart singleton count.
    pub sc2: usize,
}

/// Case counts for one direction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseSection {
    pub unchanged: usize,
    pub merged: usize,
    pub partitioned: usize,
    pub overlapping: usize,
    pub total: usize,
}

impl CaseSection {
    fn from_counts(counts: CaseCounts) -> Self {
        Self {
            unchanged: counts.unchanged,
            merged: counts.merged,
            partitioned: counts.partitioned,
            overlapping: counts.overlapping,
            total: counts.total(),
        }
    }
}

/// Singleton cluster ids per side, ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingletonSection {
    pub er1: Vec<String>,
    pub er2: Vec<String>,
}

/// One cluster's verdict with its overlap evidence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationRecord {
    /// The classified cluster.
    pub cluster: String,
    /// Case label ("Unchanged", "Merged", "Partitioned", "Overlapping").
    pub case: String,
    /// Report case number (1-4 forward, 5-8 reverse).
    pub case_number: u8,
    /// Clusters on the other side sharing members, with the shared members.
    pub intersections: BTreeMap<String, Vec<String>>,
}

impl ClassificationRecord {
    fn from_classification(c: &CaseClassification, direction: Direction) -> Self {
        Self {
            cluster: c.baseline_cluster().as_str().to_owned(),
            case: c.kind().label().to_owned(),
            case_number: c.kind().case_number(direction),
            intersections: c
                .intersections()
                .iter()
                .map(|(other, members)| {
                    (
                        other.as_str().to_owned(),
                        members.iter().map(|r| r.as_str().to_owned()).collect(),
                    )
                })
                .collect(),
        }
    }
}

/// Both directions' per-cluster verdicts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationSection {
    pub forward: Vec<ClassificationRecord>,
    pub reverse: Vec<ClassificationRecord>,
}

/// Totals for the ER1-vs-ER2 comparison chart.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterTotals {
    pub er1: usize,
    pub er2: usize,
}

/// Ready-to-plot series: case-count bars, case-proportion shares, and the
/// two cluster totals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartData {
    /// Labels in report order, shared by counts and proportions.
    pub case_labels: Vec<String>,
    pub forward_counts: Vec<usize>,
    pub reverse_counts: Vec<usize>,
    /// forward_counts divided by the baseline cluster count.
    pub forward_proportions: Vec<f64>,
    /// reverse_counts divided by the counterpart cluster count.
    pub reverse_proportions: Vec<f64>,
    pub cluster_totals: ClusterTotals,
}

/// The complete export document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonDocument {
    pub profile: ProfileSection,
    pub forward: CaseSection,
    pub reverse: CaseSection,
    /// Count of non-empty intersections (|V|).
    pub intersections: usize,
    /// TWI rounded half-up to four decimal places.
    pub twi: f64,
    pub singletons: SingletonSection,
    pub classifications: ClassificationSection,
    pub charts: ChartData,
}

fn counts_series(counts: CaseCounts) -> Vec<usize> {
    CaseKind::ALL.iter().map(|k| counts.get(*k)).collect()
}

fn proportions_series(counts: CaseCounts, denominator: usize) -> Vec<f64> {
    CaseKind::ALL
        .iter()
        .map(|k| counts.get(*k) as f64 / denominator as f64)
        .collect()
}

/// Builds the export document from a comparison result.
pub fn document_from(result: &ComparisonResult) -> ComparisonDocument {
    let p = &result.profile;
    let twi_rounded: f64 = super::format_rounded(result.twi, 4)
        .parse()
        .expect("fixed-precision float reparses");
    ComparisonDocument {
        profile: ProfileSection {
            rc: p.references,
            cc1: p.baseline_clusters,
            sc1: p.baseline_singletons,
            cc2: p.counterpart_clusters,
            sc2: p.counterpart_singletons,
        },
        forward: CaseSection::from_counts(result.forward),
        reverse: CaseSection::from_counts(result.reverse),
        intersections: result.intersection_count,
        twi: twi_rounded,
        singletons: SingletonSection {
            er1: result
                .singletons_baseline
                .iter()
                .map(|c| c.as_str().to_owned())
                .collect(),
            er2: result
                .singletons_counterpart
                .iter()
                .map(|c| c.as_str().to_owned())
                .collect(),
        },
        classifications: ClassificationSection {
            forward: result
                .forward_classifications
                .iter()
                .map(|c| ClassificationRecord::from_classification(c, Direction::Forward))
                .collect(),
            reverse: result
                .reverse_classifications
                .iter()
                .map(|c| ClassificationRecord::from_classification(c, Direction::Reverse))
                .collect(),
        },
        charts: ChartData {
            case_labels: CaseKind::ALL.iter().map(|k| k.label().to_owned()).collect(),
            forward_counts: counts_series(result.forward),
            reverse_counts: counts_series(result.reverse),
            forward_proportions: proportions_series(result.forward, p.baseline_clusters),
            reverse_proportions: proportions_series(result.reverse, p.counterpart_clusters),
            cluster_totals: ClusterTotals {
                er1: p.baseline_clusters,
                er2: p.counterpart_clusters,
            },
        },
    }
}

/// Serializes the comparison as pretty-printed JSON with a trailing newline.
pub fn export_json(result: &ComparisonResult) -> String {
    let document = document_from(result);
    let mut out =
        serde_json::to_string_pretty(&document).expect("document serialization cannot fail");
    out.push('\n');
    out
}
