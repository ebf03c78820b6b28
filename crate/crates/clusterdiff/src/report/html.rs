//! Self-contained HTML report: summary, inline-SVG charts, the full detail
//! table, and the JSON document embedded verbatim for further processing.
//!
//! The page references nothing external — no scripts, styles, fonts, or
//! images are fetched — so it renders identically offline and archives
//! cleanly. Charts are plain SVG generated here; the embedded data block is
//! byte-identical to [`export_json`]'s output.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::model::ComparisonResult;
use crate::report::{detail_rows, export_json, render_summary, ReportOptions};

/// One color per case, in report order; used by bars and pie alike.
const CASE_COLORS: [&str; 4] = ["#4e79a7", "#f28e2b", "#e15759", "#76b7b2"];
const FORWARD_BAR: &str = "#4e79a7";
const REVERSE_BAR: &str = "#a0cbe8";

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            other => out.push(other),
        }
    }
    out
}

/// Grouped bar chart of the four case counts, forward and reverse side by
/// side per case.
fn case_count_bars(labels: &[String], forward: &[usize], reverse: &[usize]) -> String {
    let max = forward
        .iter()
        .chain(reverse)
        .copied()
        .max()
        .unwrap_or(0)
        .max(1) as f64;
    let scale = 150.0 / max;
    let mut svg = String::from(
        r#"<svg width="480" height="230" viewBox="0 0 480 230" role="img" aria-label="Case counts">"#,
    );
    let _ = write!(
        svg,
        r##"<line x1="10" y1="190.00" x2="470" y2="190.00" stroke="#888" stroke-width="1"/>"##
    );
    for (i, label) in labels.iter().enumerate() {
        let group_x = 20.0 + i as f64 * 115.0;
        for (offset, (value, color)) in [(0.0, (forward[i], FORWARD_BAR)), (38.0, (reverse[i], REVERSE_BAR))]
        {
            let height = value as f64 * scale;
            let x = group_x + offset;
            let y = 190.0 - height;
            let _ = write!(
                svg,
                r#"<rect x="{x:.2}" y="{y:.2}" width="34" height="{height:.2}" fill="{color}"/>"#
            );
            let _ = write!(
                svg,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="12">{value}</text>"#,
                x + 17.0,
                y - 4.0
            );
        }
        let _ = write!(
            svg,
            r#"<text x="{:.2}" y="208.00" text-anchor="middle" font-size="12">{}</text>"#,
            group_x + 36.0,
            escape(label)
        );
    }
    let _ = write!(
        svg,
        r#"<rect x="20" y="218" width="12" height="8" fill="{FORWARD_BAR}"/><text x="36" y="226" font-size="11">forward (ER1 primary)</text>"#
    );
    let _ = write!(
        svg,
        r#"<rect x="190" y="218" width="12" height="8" fill="{REVERSE_BAR}"/><text x="206" y="226" font-size="11">reverse (ER2 primary)</text>"#
    );
    svg.push_str("</svg>");
    svg
}

/// Pie chart of the forward case proportions, with a text legend.
fn proportion_pie(labels: &[String], proportions: &[f64]) -> String {
    let (cx, cy, r) = (110.0, 110.0, 90.0);
    let mut svg = String::from(
        r#"<svg width="420" height="220" viewBox="0 0 420 220" role="img" aria-label="Case proportions">"#,
    );
    let mut angle = -PI / 2.0;
    for (i, &p) in proportions.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        let color = CASE_COLORS[i % CASE_COLORS.len()];
        if p >= 0.9999 {
            let _ = write!(
                svg,
                r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="{r:.2}" fill="{color}"/>"#
            );
            break;
        }
        let next = angle + p * 2.0 * PI;
        let (x0, y0) = (cx + r * angle.cos(), cy + r * angle.sin());
        let (x1, y1) = (cx + r * next.cos(), cy + r * next.sin());
        let large_arc = i32::from(p > 0.5);
        let _ = write!(
            svg,
            r#"<path d="M {cx:.2} {cy:.2} L {x0:.2} {y0:.2} A {r:.2} {r:.2} 0 {large_arc} 1 {x1:.2} {y1:.2} Z" fill="{color}"/>"#
        );
        angle = next;
    }
    for (i, label) in labels.iter().enumerate() {
        let y = 40.0 + i as f64 * 24.0;
        let color = CASE_COLORS[i % CASE_COLORS.len()];
        let _ = write!(
            svg,
            r#"<rect x="230" y="{:.2}" width="12" height="12" fill="{color}"/>"#,
            y - 10.0
        );
        let _ = write!(
            svg,
            r#"<text x="248" y="{y:.2}" font-size="12">{} {:.1}%</text>"#,
            escape(label),
            proportions[i] * 100.0
        );
    }
    svg.push_str("</svg>");
    svg
}

/// Two horizontal bars comparing the cluster totals of the two outcomes.
fn totals_bars(er1: usize, er2: usize) -> String {
    let max = er1.max(er2).max(1) as f64;
    let scale = 300.0 / max;
    let mut svg = String::from(
        r#"<svg width="480" height="90" viewBox="0 0 480 90" role="img" aria-label="Cluster totals">"#,
    );
    for (i, (label, value, color)) in [("ER1", er1, FORWARD_BAR), ("ER2", er2, REVERSE_BAR)]
        .into_iter()
        .enumerate()
    {
        let y = 14.0 + i as f64 * 36.0;
        let width = value as f64 * scale;
        let _ = write!(
            svg,
            r#"<text x="10" y="{:.2}" font-size="12">{label}</text>"#,
            y + 14.0
        );
        let _ = write!(
            svg,
            r#"<rect x="46" y="{y:.2}" width="{width:.2}" height="20" fill="{color}"/>"#
        );
        let _ = write!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-size="12">{value}</text>"#,
            50.0 + width,
            y + 14.0
        );
    }
    svg.push_str("</svg>");
    svg
}

/// Renders the complete standalone page for one comparison.
///
/// The detail table honors the given filter and row-cap options; summary,
/// charts, and the embedded JSON always describe the full result.
pub fn export_html(result: &ComparisonResult, options: &ReportOptions) -> String {
    let document = super::json::document_from(result);
    let summary = render_summary(result, options);
    let rows = detail_rows(result, options);
    let cap = options.max_detail_rows.unwrap_or(usize::MAX);

    let mut page = String::with_capacity(16 * 1024);
    page.push_str("<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n");
    page.push_str("<title>Cluster comparison report</title>\n<style>\n");
    page.push_str(
        "body{font-family:system-ui,sans-serif;margin:2rem auto;max-width:60rem;padding:0 1rem;color:#1a1a1a}\n\
         h1{font-size:1.5rem}h2{font-size:1.15rem;margin-top:2rem}\n\
         pre{background:#f6f6f4;padding:1rem;overflow-x:auto}\n\
         table{border-collapse:collapse;margin-top:.5rem}\n\
         th,td{border:1px solid #ccc;padding:.25rem .6rem;text-align:left;font-size:.9rem}\n\
         tr:nth-child(even){background:#fafafa}\n",
    );
    page.push_str("</style>\n</head>\n<body>\n<h1>Cluster comparison report</h1>\n");

    page.push_str("<h2>Summary</h2>\n<pre id=\"summary\">");
    page.push_str(&escape(&summary));
    page.push_str("</pre>\n");

    page.push_str("<h2>Case counts</h2>\n");
    page.push_str(&case_count_bars(
        &document.charts.case_labels,
        &document.charts.forward_counts,
        &document.charts.reverse_counts,
    ));
    page.push('\n');

    page.push_str("<h2>Case proportions (forward)</h2>\n");
    page.push_str(&proportion_pie(
        &document.charts.case_labels,
        &document.charts.forward_proportions,
    ));
    page.push('\n');

    page.push_str("<h2>Cluster totals</h2>\n");
    page.push_str(&totals_bars(
        document.charts.cluster_totals.er1,
        document.charts.cluster_totals.er2,
    ));
    page.push('\n');

    page.push_str("<h2>Detail</h2>\n<table>\n<thead><tr>");
    for column in [
        "rec_id",
        "er1_cluster",
        "er2_cluster",
        "forward_case",
        "reverse_case",
    ] {
        let _ = write!(page, "<th>{column}</th>");
    }
    page.push_str("</tr></thead>\n<tbody>\n");
    let total = rows.len();
    for row in rows.iter().take(cap) {
        let _ = write!(
            page,
            "<tr><td>{}</td><td>{}</td><td>{}</td><td>{}</td><td>{}</td></tr>\n",
            escape(&row.reference),
            escape(&row.baseline_cluster),
            escape(&row.counterpart_cluster),
            row.forward_case.label(),
            row.reverse_case.label(),
        );
    }
    page.push_str("</tbody>\n</table>\n");
    if total > cap {
        let _ = write!(page, "<p>({} more row(s) omitted)</p>\n", total - cap);
    }

    page.push_str("<script type=\"application/json\" id=\"comparison-data\">\n");
    page.push_str(&export_json(result));
    page.push_str("</script>\n</body>\n</html>\n");
    page
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::compare;
    use crate::testutil::{clustering_from, table1};
    use crate::Side;

    fn table1_result() -> ComparisonResult {
        let (baseline, counterpart) = table1();
        compare(&baseline, &counterpart).unwrap()
    }

    #[test]
    fn page_contains_the_summary_block() {
        let page = export_html(&table1_result(), &ReportOptions::default());
        assert!(page.contains("Unchanged (Case 1): 2"));
        assert!(page.contains("Merged (Case 6): 3"));
        assert!(page.contains("TWI: 0.68"));
    }

    #[test]
    fn detail_table_has_one_row_per_reference() {
        let page = export_html(&table1_result(), &ReportOptions::default());
        let body = page
            .split("<tbody>")
            .nth(1)
            .and_then(|s| s.split("</tbody>").next())
            .unwrap();
        assert_eq!(body.matches("<tr>").count(), 16);
    }

    #[test]
    fn embedded_data_is_the_json_export_verbatim() {
        let result = table1_result();
        let page = export_html(&result, &ReportOptions::default());
        assert!(page.contains(&export_json(&result)));
    }

    #[test]
    fn page_references_nothing_external() {
        let page = export_html(&table1_result(), &ReportOptions::default());
        assert!(!page.contains("http://"));
        assert!(!page.contains("https://"));
        assert!(!page.contains("src="));
        assert!(!page.contains("href="));
    }

    #[test]
    fn identifiers_are_html_escaped_in_the_table() {
        let rows = [("r<1>", "a&b"), ("r2", "a&b")];
        let baseline = clustering_from(Side::Baseline, &rows);
        let counterpart = clustering_from(Side::Counterpart, &rows);
        let result = compare(&baseline, &counterpart).unwrap();
        let page = export_html(&result, &ReportOptions::default());
        assert!(page.contains("<td>r&lt;1&gt;</td>"));
        assert!(page.contains("<td>a&amp;b</td>"));
        assert!(!page.contains("<td>r<1></td>"));
    }

    #[test]
    fn single_case_pie_collapses_to_a_circle() {
        let rows = [("1", "a"), ("2", "b")];
        let baseline = clustering_from(Side::Baseline, &rows);
        let counterpart = clustering_from(Side::Counterpart, &rows);
        let result = compare(&baseline, &counterpart).unwrap();
        let page = export_html(&result, &ReportOptions::default());
        assert!(page.contains("<circle"));
    }

    #[test]
    fn export_is_deterministic() {
        let a = export_html(&table1_result(), &ReportOptions::default());
        let b = export_html(&table1_result(), &ReportOptions::default());
        assert_eq!(a, b);
    }
}
