//! CSV loading and validation for the two clustering inputs.
//!
//! Two layouts are supported: a merged file whose records carry
//! (reference id, baseline cluster, counterpart cluster) in that column
//! order, and a pair of split files each carrying (reference id, cluster).
//! Column position is what matters; header rows are declared via
//! [`IngestOptions::has_header`], never sniffed. Standard CSV quoting with
//! doubled quotes applies, both LF and CRLF line endings are accepted, and
//! blank lines are skipped. A blank field is always an error, never an
//! empty id.
//!
//! Errors carry the file name, the 1-based physical row number, and the
//! column concerned, so a bad cell in a million-row file is findable.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::path::Path;

use crate::model::{ClusterId, Clustering, ModelError, ReferenceId, Side};

/// What to do when the two split files do not cover the same references.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MissingPolicy {
    /// Refuse the input (the default): differing reference sets usually mean
    /// the files are not two clusterings of one dataset.
    #[default]
    Strict,
    /// Keep only references present in both files, emitting one warning per
    /// dropped reference.
    Intersect,
}

/// What to do when the exact same row appears twice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DuplicatePolicy {
    /// Refuse the input (the default): silent dedup hides upstream bugs.
    #[default]
    Strict,
    /// Skip the repeated row with a warning. Conflicting rows (same
    /// reference, different cluster) are still errors.
    Lenient,
}

/// Parsing and validation options shared by all loaders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IngestOptions {
    /// Field separator; must be a single ASCII character that is neither a
    /// quote nor a line break.
    pub delimiter: char,
    /// Whether the first row of each file is a header to skip.
    pub has_header: bool,
    pub missing_policy: MissingPolicy,
    pub duplicate_policy: DuplicatePolicy,
}

impl Default for IngestOptions {
    fn default() -> Self {
        Self {
            delimiter: ',',
            has_header: true,
            missing_policy: MissingPolicy::default(),
            duplicate_policy: DuplicatePolicy::default(),
        }
    }
}

/// A successfully loaded pair of clusterings plus any non-fatal findings
/// (skipped duplicates, ignored columns, dropped references).
#[derive(Debug, Clone)]
pub struct LoadedPair {
    pub baseline: Clustering,
    pub counterpart: Clustering,
    pub warnings: Vec<String>,
}

/// Errors raised while loading clustering files.
#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("{file}: {source}")]
    Io {
        file: String,
        #[source]
        source: std::io::Error,
    },
    /// The options themselves are unusable (e.g. a quote as delimiter).
    #[error("invalid options: {reason}")]
    Config { reason: String },
    #[error("{file}: row {row}, column {column}: {reason}")]
    Parse {
        file: String,
        /// 1-based physical row number, header included.
        row: u64,
        column: &'static str,
        reason: String,
    },
    /// The exact same row occurred twice (strict duplicate policy).
    #[error("{file}: rows {first_row} and {second_row} are identical (reference '{reference}', cluster '{cluster}'); pass the lenient duplicate policy to skip repeats")]
    DuplicateRow {
        file: String,
        reference: String,
        cluster: String,
        first_row: u64,
        second_row: u64,
    },
    /// One reference was assigned to two different clusters.
    #[error("{file}: reference '{reference}' is assigned to cluster '{first_cluster}' (row {first_row}) and to cluster '{second_cluster}' (row {second_row})")]
    DuplicateReference {
        file: String,
        reference: String,
        first_cluster: String,
        first_row: u64,
        second_cluster: String,
        second_row: u64,
    },
    #[error("{file}: no data rows found")]
    EmptyInput { file: String },
    /// The two split files cover different references (strict missing policy).
    #[error("{}", mismatch_message(.baseline_file, .counterpart_file, .only_in_baseline, .only_in_counterpart))]
    ReferenceSetMismatch {
        baseline_file: String,
        counterpart_file: String,
        /// References present only in the baseline file, ascending.
        only_in_baseline: Vec<String>,
        /// References present only in the counterpart file, ascending.
        only_in_counterpart: Vec<String>,
    },
    /// Intersect mode dropped every reference.
    #[error("no reference appears in both {baseline_file} and {counterpart_file}")]
    EmptyIntersection {
        baseline_file: String,
        counterpart_file: String,
    },
    /// Clustering construction rejected pre-validated rows; indicates a bug
    /// in this module rather than in the input.
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn mismatch_message(
    baseline_file: &str,
    counterpart_file: &str,
    only_in_baseline: &[String],
    only_in_counterpart: &[String],
) -> String {
    let mut message = format!(
        "reference sets differ between {baseline_file} and {counterpart_file}"
    );
    let mut describe = |ids: &[String], file: &str| {
        if ids.is_empty() {
            return;
        }
        let shown: Vec<&str> = ids.iter().take(10).map(String::as_str).collect();
        let suffix = if ids.len() > shown.len() {
            format!(" … ({} total)", ids.len())
        } else {
            String::new()
        };
        let _ = write!(
            message,
            "; {} reference(s) only in {file}: {}{suffix}",
            ids.len(),
            shown.join(", ")
        );
    };
    describe(only_in_baseline, baseline_file);
    describe(only_in_counterpart, counterpart_file);
    message
}

/// One validated data row: physical row number plus its trimmed fields.
struct Row {
    number: u64,
    fields: Vec<String>,
}

/// Reads a file's data rows, enforcing the column count and non-blank cells.
fn read_rows(
    path: &Path,
    columns: &[&'static str],
    options: &IngestOptions,
    warnings: &mut Vec<String>,
) -> Result<Vec<Row>, IngestError> {
    let file = path.display().to_string();
    if !options.delimiter.is_ascii()
        || options.delimiter == '"'
        || options.delimiter == '\n'
        || options.delimiter == '\r'
    {
        return Err(IngestError::Config {
            reason: format!(
                "delimiter {:?} must be a single ASCII character other than a quote or line break",
                options.delimiter
            ),
        });
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(options.has_header)
        .delimiter(options.delimiter as u8)
        .flexible(true)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(source) => IngestError::Io {
                file: file.clone(),
                source,
            },
            other => IngestError::Parse {
                file: file.clone(),
                row: 0,
                column: columns[0],
                reason: format!("{other:?}"),
            },
        })?;

    let mut rows = Vec::new();
    let mut extra_columns_reported = false;
    for record in reader.records() {
        let record = record.map_err(|e| {
            let row = e.position().map(|p| p.line()).unwrap_or(0);
            match e.into_kind() {
                csv::ErrorKind::Io(source) => IngestError::Io {
                    file: file.clone(),
                    source,
                },
                csv::ErrorKind::Utf8 { .. } => IngestError::Parse {
                    file: file.clone(),
                    row,
                    column: columns[0],
                    reason: "invalid UTF-8".into(),
                },
                other => IngestError::Parse {
                    file: file.clone(),
                    row,
                    column: columns[0],
                    reason: format!("{other:?}"),
                },
            }
        })?;
        let number = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() > columns.len() && !extra_columns_reported {
            warnings.push(format!(
                "{file}: row {number} has {} column(s) beyond the {} used; extras are ignored (reported once)",
                record.len() - columns.len(),
                columns.len(),
            ));
            extra_columns_reported = true;
        }
        let mut fields = Vec::with_capacity(columns.len());
        for (i, column) in columns.iter().enumerate() {
            let raw = record.get(i).ok_or_else(|| IngestError::Parse {
                file: file.clone(),
                row: number,
                column,
                reason: format!(
                    "missing column (row has {} field(s), expected {})",
                    record.len(),
                    columns.len()
                ),
            })?;
            let trimmed = raw.trim();
            if trimmed.is_empty() {
                return Err(IngestError::Parse {
                    file: file.clone(),
                    row: number,
                    column,
                    reason: "field is blank".into(),
                });
            }
            fields.push(trimmed.to_owned());
        }
        rows.push(Row { number, fields });
    }
    if rows.is_empty() {
        return Err(IngestError::EmptyInput { file });
    }
    Ok(rows)
}

/// Tracks first sightings of each reference so duplicates and conflicts are
/// reported with both row numbers.
struct SeenReferences<'a> {
    file: &'a str,
    policy: DuplicatePolicy,
    seen: HashMap<String, (String, u64)>,
}

/// Outcome of offering one row to [`SeenReferences`].
enum RowFate {
    Keep,
    SkipDuplicate,
}

impl<'a> SeenReferences<'a> {
    fn new(file: &'a str, policy: DuplicatePolicy) -> Self {
        Self {
            file,
            policy,
            seen: HashMap::new(),
        }
    }

    fn offer(
        &mut self,
        reference: &str,
        cluster: &str,
        row: u64,
        warnings: &mut Vec<String>,
    ) -> Result<RowFate, IngestError> {
        match self.seen.get(reference) {
            None => {
                self.seen
                    .insert(reference.to_owned(), (cluster.to_owned(), row));
                Ok(RowFate::Keep)
            }
            Some((first_cluster, first_row)) if first_cluster == cluster => {
                match self.policy {
                    DuplicatePolicy::Strict => Err(IngestError::DuplicateRow {
                        file: self.file.to_owned(),
                        reference: reference.to_owned(),
                        cluster: cluster.to_owned(),
                        first_row: *first_row,
                        second_row: row,
                    }),
                    DuplicatePolicy::Lenient => {
                        warnings.push(format!(
                            "{}: row {row} repeats row {first_row} (reference '{reference}'); skipped",
                            self.file
                        ));
                        Ok(RowFate::SkipDuplicate)
                    }
                }
            }
            Some((first_cluster, first_row)) => Err(IngestError::DuplicateReference {
                file: self.file.to_owned(),
                reference: reference.to_owned(),
                first_cluster: first_cluster.clone(),
                first_row: *first_row,
                second_cluster: cluster.to_owned(),
                second_row: row,
            }),
        }
    }
}

const MERGED_COLUMNS: [&str; 3] = ["rec_id", "er1_cluster", "er2_cluster"];
const SPLIT_COLUMNS: [&str; 2] = ["rec_id", "cluster"];

/// Loads a merged three-column file: reference id, baseline cluster,
/// counterpart cluster.
///
/// Both clusterings cover the same reference set by construction. A repeated
/// row counts as a duplicate only when all three fields repeat; a repeated
/// reference with a differing cluster on either side is a conflict error.
pub fn load_merged(path: &Path, options: &IngestOptions) -> Result<LoadedPair, IngestError> {
    let file = path.display().to_string();
    let mut warnings = Vec::new();
    let rows = read_rows(path, &MERGED_COLUMNS, options, &mut warnings)?;

    // One sighting tracker per side: a conflict can hide behind a row whose
    // other side looks like a plain repeat, so both must be offered before
    // deciding the row's fate.
    let mut seen: HashMap<String, (String, String, u64)> = HashMap::new();
    let mut baseline_pairs = Vec::with_capacity(rows.len());
    let mut counterpart_pairs = Vec::with_capacity(rows.len());
    for row in &rows {
        let [reference, er1, er2] = [&row.fields[0], &row.fields[1], &row.fields[2]];
        match seen.get(reference.as_str()) {
            None => {
                seen.insert(
                    reference.clone(),
                    (er1.clone(), er2.clone(), row.number),
                );
            }
            Some((first_er1, first_er2, first_row)) => {
                if first_er1 != er1 || first_er2 != er2 {
                    let (first, second) = if first_er1 != er1 {
                        (first_er1, er1)
                    } else {
                        (first_er2, er2)
                    };
                    return Err(IngestError::DuplicateReference {
                        file,
                        reference: reference.clone(),
                        first_cluster: first.clone(),
                        first_row: *first_row,
                        second_cluster: second.clone(),
                        second_row: row.number,
                    });
                }
                match options.duplicate_policy {
                    DuplicatePolicy::Strict => {
                        return Err(IngestError::DuplicateRow {
                            file,
                            reference: reference.clone(),
                            cluster: er1.clone(),
                            first_row: *first_row,
                            second_row: row.number,
                        });
                    }
                    DuplicatePolicy::Lenient => {
                        warnings.push(format!(
                            "{file}: row {} repeats row {first_row} (reference '{reference}'); skipped",
                            row.number
                        ));
                        continue;
                    }
                }
            }
        }
        let rid = ReferenceId::new(reference)?;
        baseline_pairs.push((rid.clone(), ClusterId::new(Side::Baseline, er1)?));
        counterpart_pairs.push((rid, ClusterId::new(Side::Counterpart, er2)?));
    }

    Ok(LoadedPair {
        baseline: Clustering::from_pairs(Side::Baseline, baseline_pairs)?,
        counterpart: Clustering::from_pairs(Side::Counterpart, counterpart_pairs)?,
        warnings,
    })
}

/// Loads one side of a split pair: (reference id, cluster) per row.
fn load_side(
    path: &Path,
    options: &IngestOptions,
    warnings: &mut Vec<String>,
) -> Result<BTreeMap<String, (String, u64)>, IngestError> {
    let file = path.display().to_string();
    let rows = read_rows(path, &SPLIT_COLUMNS, options, warnings)?;
    let mut tracker = SeenReferences::new(&file, options.duplicate_policy);
    let mut assignments = BTreeMap::new();
    for row in &rows {
        let [reference, cluster] = [&row.fields[0], &row.fields[1]];
        match tracker.offer(reference, cluster, row.number, warnings)? {
            RowFate::Keep => {
                assignments.insert(reference.clone(), (cluster.clone(), row.number));
            }
            RowFate::SkipDuplicate => {}
        }
    }
    Ok(assignments)
}

/// Loads one clustering from a two-column file (reference id, cluster) for
/// the given side, returning it with any warnings collected on the way.
pub fn load_clustering(
    path: &Path,
    side: Side,
    options: &IngestOptions,
) -> Result<(Clustering, Vec<String>), IngestError> {
    let mut warnings = Vec::new();
    let assignments = load_side(path, options, &mut warnings)?;
    let pairs: Vec<(ReferenceId, ClusterId)> = assignments
        .iter()
        .map(|(reference, (cluster, _))| {
            Ok::<_, IngestError>((ReferenceId::new(reference)?, ClusterId::new(side, cluster)?))
        })
        .collect::<Result<_, _>>()?;
    Ok((Clustering::from_pairs(side, pairs)?, warnings))
}

/// Verifies that two already-loaded clusterings cover the same references,
/// reporting the difference exactly like the strict split loader does.
/// `baseline_name` and `counterpart_name` identify the inputs in the error.
pub fn check_same_references(
    baseline: &Clustering,
    counterpart: &Clustering,
    baseline_name: &str,
    counterpart_name: &str,
) -> Result<(), IngestError> {
    if baseline.same_reference_set(counterpart) {
        return Ok(());
    }
    let baseline_keys: BTreeSet<&ReferenceId> = baseline
        .clusters()
        .flat_map(|(_, members)| members.iter())
        .collect();
    let counterpart_keys: BTreeSet<&ReferenceId> = counterpart
        .clusters()
        .flat_map(|(_, members)| members.iter())
        .collect();
    let to_names = |ids: Vec<&&ReferenceId>| -> Vec<String> {
        ids.into_iter().map(|r| r.as_str().to_owned()).collect()
    };
    Err(IngestError::ReferenceSetMismatch {
        baseline_file: baseline_name.to_owned(),
        counterpart_file: counterpart_name.to_owned(),
        only_in_baseline: to_names(baseline_keys.difference(&counterpart_keys).collect()),
        only_in_counterpart: to_names(counterpart_keys.difference(&baseline_keys).collect()),
    })
}

/// Restricts two clusterings to the references they share, with one warning
/// per dropped reference. Fails when nothing is shared.
pub fn intersect_references(
    baseline: &Clustering,
    counterpart: &Clustering,
    baseline_name: &str,
    counterpart_name: &str,
) -> Result<(Clustering, Clustering, Vec<String>), IngestError> {
    let mut warnings = Vec::new();
    let restrict = |keep_in: &Clustering,
                    from: &Clustering,
                    name: &str,
                    warnings: &mut Vec<String>|
     -> Vec<(ReferenceId, ClusterId)> {
        let mut kept = Vec::new();
        for (cluster, members) in from.clusters() {
            for reference in members {
                if keep_in.contains_reference(reference) {
                    kept.push((reference.clone(), cluster.clone()));
                } else {
                    warnings.push(format!(
                        "reference '{}' appears only in {name}; dropped",
                        reference.as_str()
                    ));
                }
            }
        }
        kept
    };
    let baseline_pairs = restrict(counterpart, baseline, baseline_name, &mut warnings);
    let counterpart_pairs = restrict(baseline, counterpart, counterpart_name, &mut warnings);
    if baseline_pairs.is_empty() {
        return Err(IngestError::EmptyIntersection {
            baseline_file: baseline_name.to_owned(),
            counterpart_file: counterpart_name.to_owned(),
        });
    }
    warnings.sort();
    Ok((
        Clustering::from_pairs(baseline.side(), baseline_pairs)?,
        Clustering::from_pairs(counterpart.side(), counterpart_pairs)?,
        warnings,
    ))
}

/// Loads a split pair: `path1` holds the baseline assignments, `path2` the
/// counterpart assignments, two columns each.
///
/// Under the strict missing policy the two files must cover the identical
/// reference set; under intersect, one-sided references are dropped with a
/// warning each.
pub fn load_split(
    path1: &Path,
    path2: &Path,
    options: &IngestOptions,
) -> Result<LoadedPair, IngestError> {
    let baseline_file = path1.display().to_string();
    let counterpart_file = path2.display().to_string();
    let (baseline, mut warnings) = load_clustering(path1, Side::Baseline, options)?;
    let (counterpart, more) = load_clustering(path2, Side::Counterpart, options)?;
    warnings.extend(more);

    if baseline.same_reference_set(&counterpart) {
        return Ok(LoadedPair {
            baseline,
            counterpart,
            warnings,
        });
    }
    match options.missing_policy {
        MissingPolicy::Strict => {
            check_same_references(&baseline, &counterpart, &baseline_file, &counterpart_file)?;
            unreachable!("mismatch already established");
        }
        MissingPolicy::Intersect => {
            let (baseline, counterpart, more) = intersect_references(
                &baseline,
                &counterpart,
                &baseline_file,
                &counterpart_file,
            )?;
            warnings.extend(more);
            Ok(LoadedPair {
                baseline,
                counterpart,
                warnings,
            })
        }
    }
}

/// Writes a merged three-column file (with header) for two clusterings of
/// the same reference set, rows ascending by reference id.
pub fn write_merged(
    path: &Path,
    baseline: &Clustering,
    counterpart: &Clustering,
) -> Result<(), IngestError> {
    let file = path.display().to_string();
    let io_err = |source: csv::Error| match source.into_kind() {
        csv::ErrorKind::Io(source) => IngestError::Io {
            file: path.display().to_string(),
            source,
        },
        other => IngestError::Config {
            reason: format!("csv write failed: {other:?}"),
        },
    };
    if !baseline.same_reference_set(counterpart) {
        return Err(IngestError::ReferenceSetMismatch {
            baseline_file: file.clone(),
            counterpart_file: file,
            only_in_baseline: Vec::new(),
            only_in_counterpart: Vec::new(),
        });
    }
    let mut writer = csv::Writer::from_path(path).map_err(io_err)?;
    writer.write_record(MERGED_COLUMNS).map_err(io_err)?;
    let mut rows: BTreeMap<&ReferenceId, (&ClusterId, &ClusterId)> = BTreeMap::new();
    for (cluster, members) in baseline.clusters() {
        for reference in members {
            let other = counterpart
                .cluster_of(reference)
                .expect("same reference set");
            rows.insert(reference, (cluster, other));
        }
    }
    for (reference, (er1, er2)) in rows {
        writer
            .write_record([reference.as_str(), er1.as_str(), er2.as_str()])
            .map_err(io_err)?;
    }
    writer.flush().map_err(|source| IngestError::Io {
        file: path.display().to_string(),
        source,
    })?;
    Ok(())
}

/// Writes one clustering as a two-column file (with header), rows ascending
/// by reference id.
pub fn write_split(path: &Path, clustering: &Clustering) -> Result<(), IngestError> {
    let io_err = |source: csv::Error| match source.into_kind() {
        csv::ErrorKind::Io(source) => IngestError::Io {
            file: path.display().to_string(),
            source,
        },
        other => IngestError::Config {
            reason: format!("csv write failed: {other:?}"),
        },
    };
    let mut writer = csv::Writer::from_path(path).map_err(io_err)?;
    writer.write_record(SPLIT_COLUMNS).map_err(io_err)?;
    let mut rows: BTreeMap<&ReferenceId, &ClusterId> = BTreeMap::new();
    for (cluster, members) in clustering.clusters() {
        for reference in members {
            rows.insert(reference, cluster);
        }
    }
    for (reference, cluster) in rows {
        writer
            .write_record([reference.as_str(), cluster.as_str()])
            .map_err(io_err)?;
    }
    writer.flush().map_err(|source| IngestError::Io {
        file: path.display().to_string(),
        source,
    })?;
    Ok(())
}
