//! Rendering of comparison results: the fixed-layout summary report, the
//! per-reference detail listing, sweep tables, and the JSON and HTML exports.
//!
//! Every renderer is a pure function from an immutable result to a string,
//! and all output is byte-deterministic: map iteration orders are sorted,
//! float formatting is fixed, and nothing depends on wall time or locale.

mod html;
mod json;

pub use html::export_html;
pub use json::{document_from, export_json, ComparisonDocument};

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::model::{CaseKind, ComparisonResult, Direction, Side, SweepRow};

/// Output format selector, as exposed on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    /// Human-readable summary (plus detail when filtering).
    Text,
    /// Single machine-readable document, chart data included.
    Json,
    /// Per-reference detail rows as CSV.
    CsvDetail,
    /// Self-contained page with summary, charts, and detail table.
    Html,
}

/// Which direction's case verdict a detail filter tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DirectionFilter {
    /// Match on the baseline cluster's case only.
    Forward,
    /// Match on the counterpart cluster's case only.
    Reverse,
    /// Match when either direction's case is selected (the default).
    #[default]
    Both,
}

/// Rendering options; the defaults reproduce the full reports.
#[derive(Debug, Clone, Default)]
pub struct ReportOptions {
    /// When set, detail rows are restricted to references whose cluster falls
    /// into one of these cases. Must not be empty when present.
    pub case_filter: Option<BTreeSet<CaseKind>>,
    /// Which direction the case filter applies to.
    pub direction: DirectionFilter,
    /// Cap on emitted detail rows; text output notes how many were cut.
    pub max_detail_rows: Option<usize>,
    /// Decimal places for TWI in text output (default 2; JSON always uses 4).
    pub twi_precision: Option<u8>,
}

/// Rounds half-up at `places` decimals and formats with exactly that many
/// digits, so 0.675 becomes "0.68" rather than banker's-rounded "0.67".
pub(crate) fn format_rounded(value: f64, places: u8) -> String {
    let factor = 10f64.powi(places as i32);
    let rounded = (value * factor + 0.5).floor() / factor;
    format!("{rounded:.prec$}", prec = places as usize)
}

/// Renders the fixed-layout summary: case counts for both directions,
/// cluster totals, and singleton counts, followed by the overall metrics
/// (reference count, intersection count, TWI).
///
/// Layout and wording of the leading block are stable; downstream golden
/// tests depend on them byte for byte. The metric lines are appended after
/// the block, separated by a blank line.
pub fn render_summary(result: &ComparisonResult, options: &ReportOptions) -> String {
    let p = &result.profile;
    let mut out = String::new();
    out.push_str("Detailed Summary Report\n");
    out.push_str("ER1 as primary and ER2 as secondary:\n");
    for kind in CaseKind::ALL {
        let _ = writeln!(
            out,
            "{} (Case {}): {}",
            kind.label(),
            kind.case_number(Direction::Forward),
            result.forward.get(kind)
        );
    }
    let _ = writeln!(out, "ER1 clusters: {}", p.baseline_clusters);
    out.push('\n');
    out.push_str("ER2 as primary and ER1 as secondary:\n");
    for kind in CaseKind::ALL {
        let _ = writeln!(
            out,
            "{} (Case {}): {}",
            kind.label(),
            kind.case_number(Direction::Reverse),
            result.reverse.get(kind)
        );
    }
    let _ = writeln!(out, "ER2 clusters: {}", p.counterpart_clusters);
    out.push('\n');
    let _ = writeln!(
        out,
        "Total clusters: {}",
        p.baseline_clusters + p.counterpart_clusters
    );
    out.push('\n');
    out.push_str("Singletons:\n");
    let _ = writeln!(out, "ER1 Singletons: {}", p.baseline_singletons);
    let _ = writeln!(out, "ER2 Singletons: {}", p.counterpart_singletons);
    out.push('\n');
    let _ = writeln!(out, "References (RC): {}", p.references);
    let _ = writeln!(
        out,
        "Non-empty intersections (|V|): {}",
        result.intersection_count
    );
    let precision = options.twi_precision.unwrap_or(2);
    let _ = writeln!(out, "TWI: {}", format_rounded(result.twi, precision));
    out
}

/// One detail line: a reference with its cluster on each side and the case
/// verdict of each of those clusters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct DetailRow {
    pub reference: String,
    pub baseline_cluster: String,
    pub counterpart_cluster: String,
    pub forward_case: CaseKind,
    pub reverse_case: CaseKind,
}

impl DetailRow {
    fn selected(&self, options: &ReportOptions) -> bool {
        let Some(filter) = &options.case_filter else {
            return true;
        };
        match options.direction {
            DirectionFilter::Forward => filter.contains(&self.forward_case),
            DirectionFilter::Reverse => filter.contains(&self.reverse_case),
            DirectionFilter::Both => {
                filter.contains(&self.forward_case) || filter.contains(&self.reverse_case)
            }
        }
    }
}

/// All detail rows, ordered by baseline cluster id then reference id, with
/// the case filter applied but before any row cap.
pub(crate) fn detail_rows(result: &ComparisonResult, options: &ReportOptions) -> Vec<DetailRow> {
    let reverse_kind: BTreeMap<&str, CaseKind> = result
        .reverse_classifications
        .iter()
        .map(|c| (c.baseline_cluster().as_str(), c.kind()))
        .collect();
    let mut rows = Vec::with_capacity(result.profile.references);
    for classification in &result.forward_classifications {
        let mut cluster_rows = Vec::new();
        for (counterpart, members) in classification.intersections() {
            debug_assert_eq!(counterpart.side(), Side::Counterpart);
            for reference in members {
                cluster_rows.push(DetailRow {
                    reference: reference.as_str().to_owned(),
                    baseline_cluster: classification.baseline_cluster().as_str().to_owned(),
                    counterpart_cluster: counterpart.as_str().to_owned(),
                    forward_case: classification.kind(),
                    reverse_case: *reverse_kind
                        .get(counterpart.as_str())
                        .expect("every counterpart cluster is classified"),
                });
            }
        }
        cluster_rows.sort_by(|a, b| a.reference.cmp(&b.reference));
        rows.extend(
            cluster_rows
                .into_iter()
                .filter(|row| row.selected(options)),
        );
    }
    rows
}

const DETAIL_HEADER: [&str; 5] = [
    "rec_id",
    "er1_cluster",
    "er2_cluster",
    "forward_case",
    "reverse_case",
];

/// Renders the detail listing as an aligned text table.
pub fn render_detail(result: &ComparisonResult, options: &ReportOptions) -> String {
    let rows = detail_rows(result, options);
    let total = rows.len();
    let cap = options.max_detail_rows.unwrap_or(usize::MAX);
    let shown = &rows[..total.min(cap)];

    let cells = |row: &DetailRow| -> [String; 5] {
        [
            row.reference.clone(),
            row.baseline_cluster.clone(),
            row.counterpart_cluster.clone(),
            row.forward_case.label().to_owned(),
            row.reverse_case.label().to_owned(),
        ]
    };
    let mut widths: [usize; 5] = DETAIL_HEADER.map(str::len);
    let materialized: Vec<[String; 5]> = shown.iter().map(cells).collect();
    for row in &materialized {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let emit = |row: &[String; 5], out: &mut String| {
        let line = row
            .iter()
            .zip(widths)
            .map(|(cell, w)| format!("{cell:<w$}"))
            .collect::<Vec<_>>()
            .join("  ");
        out.push_str(line.trim_end());
        out.push('\n');
    };
    emit(&DETAIL_HEADER.map(str::to_owned), &mut out);
    for row in &materialized {
        emit(row, &mut out);
    }
    if total > shown.len() {
        let _ = writeln!(out, "({} more row(s) omitted)", total - shown.len());
    }
    out
}

/// Renders the detail listing as CSV with a fixed header.
pub fn render_detail_csv(result: &ComparisonResult, options: &ReportOptions) -> String {
    let rows = detail_rows(result, options);
    let cap = options.max_detail_rows.unwrap_or(usize::MAX);
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(DETAIL_HEADER)
        .expect("write to memory cannot fail");
    for row in rows.iter().take(cap) {
        writer
            .write_record([
                row.reference.as_str(),
                row.baseline_cluster.as_str(),
                row.counterpart_cluster.as_str(),
                row.forward_case.label(),
                row.reverse_case.label(),
            ])
            .expect("write to memory cannot fail");
    }
    String::from_utf8(writer.into_inner().expect("memory writer"))
        .expect("csv output is UTF-8")
}

const SWEEP_HEADER: [&str; 9] = [
    "label", "CC1", "SC1", "UC", "MC", "PC", "OC", "CC2", "SC2",
];

fn sweep_cells(row: &SweepRow) -> [String; 9] {
    [
        row.label.clone(),
        row.baseline_clusters.to_string(),
        row.baseline_singletons.to_string(),
        row.cases.unchanged.to_string(),
        row.cases.merged.to_string(),
        row.cases.partitioned.to_string(),
        row.cases.overlapping.to_string(),
        row.counterpart_clusters.to_string(),
        row.counterpart_singletons.to_string(),
    ]
}

/// Renders a sweep as an aligned text table, one row per variant in input
/// order. The row whose variant reproduced the baseline exactly is flagged
/// with a trailing `*`.
pub fn render_sweep(rows: &[SweepRow], baseline_label: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "Sweep against baseline: {baseline_label}");
    out.push('\n');
    let mut widths: [usize; 9] = SWEEP_HEADER.map(str::len);
    let materialized: Vec<[String; 9]> = rows.iter().map(sweep_cells).collect();
    for row in &materialized {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let emit = |cells: &[String; 9], flag: &str, out: &mut String| {
        let mut line = String::new();
        for (i, (cell, w)) in cells.iter().zip(widths).enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            if i == 0 {
                let _ = write!(line, "{cell:<w$}");
            } else {
                let _ = write!(line, "{cell:>w$}");
            }
        }
        line.push_str(flag);
        out.push_str(line.trim_end());
        out.push('\n');
    };
    emit(&SWEEP_HEADER.map(str::to_owned), "", &mut out);
    for (row, cells) in rows.iter().zip(&materialized) {
        let flag = if row.matches_baseline() { "  *" } else { "" };
        emit(cells, flag, &mut out);
    }
    out.push('\n');
    out.push_str("* variant identical to the baseline\n");
    out
}

/// Renders a sweep as CSV; the flag becomes a `baseline` column holding
/// `true`/`false`.
pub fn render_sweep_csv(rows: &[SweepRow]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = SWEEP_HEADER
        .iter()
        .map(|h| h.to_ascii_lowercase())
        .collect();
    header.push("baseline".into());
    writer
        .write_record(&header)
        .expect("write to memory cannot fail");
    for row in rows {
        let mut record: Vec<String> = sweep_cells(row).into();
        record.push(row.matches_baseline().to_string());
        writer
            .write_record(&record)
            .expect("write to memory cannot fail");
    }
    String::from_utf8(writer.into_inner().expect("memory writer"))
        .expect("csv output is UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::compare;
    use crate::model::CaseCounts;
    use crate::testutil::{clustering_from, table1};
    use crate::Side;

    fn table1_result() -> ComparisonResult {
        let (baseline, counterpart) = table1();
        compare(&baseline, &counterpart).unwrap()
    }

    #[test]
    fn summary_reproduces_the_reference_layout() {
        let expected = "\
Detailed Summary Report
ER1 as primary and ER2 as secondary:
Unchanged (Case 1): 2
Merged (Case 2): 2
Partitioned (Case 3): 1
Overlapping (Case 4): 2
ER1 clusters: 7

ER2 as primary and ER1 as secondary:
Unchanged (Case 5): 2
Merged (Case 6): 3
Partitioned (Case 7): 1
Overlapping (Case 8): 2
ER2 clusters: 8

Total clusters: 15

Singletons:
ER1 Singletons: 2
ER2 Singletons: 3

References (RC): 16
Non-empty intersections (|V|): 11
TWI: 0.68
";
        assert_eq!(
            render_summary(&table1_result(), &ReportOptions::default()),
            expected
        );
    }

    #[test]
    fn summary_for_identical_single_cluster_inputs() {
        let rows = [("1", "a"), ("2", "a")];
        let baseline = clustering_from(Side::Baseline, &rows);
        let counterpart = clustering_from(Side::Counterpart, &rows);
        let result = compare(&baseline, &counterpart).unwrap();
        let summary = render_summary(&result, &ReportOptions::default());
        assert!(summary.contains("Unchanged (Case 1): 1\n"));
        assert!(summary.contains("Total clusters: 2\n"));
        assert!(summary.contains("TWI: 1.00\n"));
    }

    #[test]
    fn twi_precision_is_adjustable() {
        let summary = render_summary(
            &table1_result(),
            &ReportOptions {
                twi_precision: Some(4),
                ..ReportOptions::default()
            },
        );
        assert!(summary.contains("TWI: 0.6803\n"));
    }

    #[test]
    fn detail_row_count_equals_reference_count_without_filter() {
        let rows = detail_rows(&table1_result(), &ReportOptions::default());
        assert_eq!(rows.len(), 16);
    }

    #[test]
    fn detail_rows_are_ordered_by_cluster_then_reference() {
        let rows = detail_rows(&table1_result(), &ReportOptions::default());
        let clusters: Vec<&str> = rows.iter().map(|r| r.baseline_cluster.as_str()).collect();
        let mut sorted = clusters.clone();
        sorted.sort();
        assert_eq!(clusters, sorted);
        // Within cluster g, references come in id order (lexicographic).
        let in_g: Vec<&str> = rows
            .iter()
            .filter(|r| r.baseline_cluster == "g")
            .map(|r| r.reference.as_str())
            .collect();
        assert_eq!(in_g, ["14", "15", "16"]);
    }

    #[test]
    fn overlapping_filter_selects_the_two_overlapping_clusters() {
        let options = ReportOptions {
            case_filter: Some([CaseKind::Overlapping].into()),
            ..ReportOptions::default()
        };
        let rows = detail_rows(&table1_result(), &options);
        assert_eq!(rows.len(), 6);
        assert!(rows
            .iter()
            .all(|r| r.baseline_cluster == "f" || r.baseline_cluster == "g"));
    }

    #[test]
    fn reverse_filter_follows_the_counterpart_cases() {
        let options = ReportOptions {
            case_filter: Some([CaseKind::Merged].into()),
            direction: DirectionFilter::Reverse,
            ..ReportOptions::default()
        };
        let rows = detail_rows(&table1_result(), &options);
        // Reverse-merged clusters are w, y, and z's counterparts... i.e. the
        // counterpart clusters classified Merged against the baseline.
        assert!(!rows.is_empty());
        assert!(rows.iter().all(|r| r.reverse_case == CaseKind::Merged));
    }

    #[test]
    fn detail_text_is_aligned_and_capped() {
        let options = ReportOptions {
            max_detail_rows: Some(3),
            ..ReportOptions::default()
        };
        let text = render_detail(&table1_result(), &options);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 5); // header + 3 rows + omission note
        assert!(lines[0].starts_with("rec_id"));
        assert_eq!(lines[4], "(13 more row(s) omitted)");
    }

    #[test]
    fn detail_csv_has_the_pinned_header() {
        let csv = render_detail_csv(&table1_result(), &ReportOptions::default());
        let mut lines = csv.lines();
        assert_eq!(
            lines.next(),
            Some("rec_id,er1_cluster,er2_cluster,forward_case,reverse_case")
        );
        assert_eq!(csv.lines().count(), 17);
        assert!(csv.contains("1,a,x,Unchanged,Unchanged"));
        // Reference 10 sits in forward-partitioned e and in the counterpart
        // singleton t, which the reverse direction classifies as merged.
        assert!(csv.contains("10,e,t,Partitioned,Merged"));
    }

    #[test]
    fn summary_counts_match_detail_recomputation() {
        let result = table1_result();
        let rows = detail_rows(&result, &ReportOptions::default());
        // Count distinct baseline clusters per forward case from the rows.
        let mut seen: BTreeMap<(&str, CaseKind), ()> = BTreeMap::new();
        for row in &rows {
            seen.insert((row.baseline_cluster.as_str(), row.forward_case), ());
        }
        let mut recount = CaseCounts::default();
        for (_, kind) in seen.keys() {
            recount.record(*kind);
        }
        assert_eq!(recount, result.forward);
    }

    #[test]
    fn sweep_table_flags_the_baseline_row() {
        let result = table1_result();
        let changed = SweepRow::from_result("mu=0.50", &result);
        let same = SweepRow {
            label: "mu=0.67".into(),
            baseline_clusters: 7,
            baseline_singletons: 2,
            cases: CaseCounts {
                unchanged: 7,
                merged: 0,
                partitioned: 0,
                overlapping: 0,
            },
            counterpart_clusters: 7,
            counterpart_singletons: 2,
        };
        let text = render_sweep(&[changed.clone(), same.clone()], "mu=0.67");
        assert!(text.starts_with("Sweep against baseline: mu=0.67\n"));
        let flagged: Vec<&str> = text.lines().filter(|l| l.ends_with('*')).collect();
        assert_eq!(flagged.len(), 1);
        assert!(flagged[0].starts_with("mu=0.67"));

        let csv = render_sweep_csv(&[changed, same]);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next(),
            Some("label,cc1,sc1,uc,mc,pc,oc,cc2,sc2,baseline")
        );
        assert_eq!(lines.next(), Some("mu=0.50,7,2,2,2,1,2,8,3,false"));
        assert_eq!(lines.next(), Some("mu=0.67,7,2,7,0,0,0,7,2,true"));
    }

    #[test]
    fn single_row_sweep_is_valid() {
        let row = SweepRow::from_result("only", &table1_result());
        let text = render_sweep(&[row], "base");
        assert!(text.contains("only"));
        assert!(text.lines().count() >= 3);
    }

    #[test]
    fn rounding_is_half_up() {
        assert_eq!(format_rounded(0.675, 2), "0.68");
        assert_eq!(format_rounded(0.6803013430498075, 2), "0.68");
        assert_eq!(format_rounded(0.6803013430498075, 4), "0.6803");
        assert_eq!(format_rounded(1.0, 2), "1.00");
        assert_eq!(format_rounded(0.25, 4), "0.2500");
    }
}
