//! `clusterdiff`: compare two clusterings of one reference set from the
//! command line.
//!
//! Three workflows map to three subcommands: `compare` runs one comparison
//! and renders it (text, JSON, CSV detail, or HTML), `sweep` compares a
//! baseline against a series of variants and prints the parameter-sweep
//! table, and `validate` checks input files without comparing. A hidden
//! `gen` subcommand produces synthetic fixtures with known case counts.
//!
//! Exit codes: 0 success, 1 data/validation error, 2 usage error.

use std::collections::BTreeSet;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rayon::prelude::*;

use clusterdiff::ingest::{
    check_same_references, intersect_references, load_clustering, load_merged, load_split,
    DuplicatePolicy, IngestError, IngestOptions, LoadedPair, MissingPolicy,
};
use clusterdiff::metrics::{compare, MetricsError};
use clusterdiff::oracle::{perturb, random_clustering, random_edit_script, PerturbError};
use clusterdiff::report::{
    export_html, export_json, render_detail, render_detail_csv, render_summary, render_sweep,
    render_sweep_csv, DirectionFilter, ReportOptions,
};
use clusterdiff::{CaseKind, Side, SweepRow};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Perturb(#[from] PerturbError),
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("--labels supplies {given} label(s) but there are {needed} variant(s)")]
    LabelCount { given: usize, needed: usize },
    #[error("{failed} of {total} variant comparison(s) failed")]
    SweepFailures { failed: usize, total: usize },
}

#[derive(Parser)]
#[command(
    name = "clusterdiff",
    version,
    about = "Compare two clusterings of the same reference set",
    long_about = "Compare two clusterings (e.g. two entity-resolution runs) of the same \
                  reference set: classify every cluster as unchanged, merged, partitioned, \
                  or overlapping, count singletons, and compute the TWI similarity index — \
                  no ground truth required."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compare two clusterings and render a report
    Compare(CompareArgs),
    /// Compare one baseline against several variants, as a table
    Sweep(SweepArgs),
    /// Check clustering files and print their profile without comparing
    Validate(ValidateArgs),
    /// Generate a synthetic comparison fixture with known case counts
    #[command(hide = true)]
    Gen(GenArgs),
}

/// Parsing options shared by every file-reading subcommand.
#[derive(Args, Debug)]
struct IngestFlags {
    /// Field delimiter (single ASCII character)
    #[arg(long, default_value_t = ',')]
    delimiter: char,
    /// Treat the first row as data instead of a header
    #[arg(long)]
    no_header: bool,
    /// Handling of references present in only one input
    #[arg(long, value_enum, default_value_t = MissingPolicyArg::Strict)]
    missing_policy: MissingPolicyArg,
    /// Handling of exact repeated rows
    #[arg(long, value_enum, default_value_t = DuplicatePolicyArg::Strict)]
    duplicate_policy: DuplicatePolicyArg,
}

impl IngestFlags {
    fn to_options(&self) -> IngestOptions {
        IngestOptions {
            delimiter: self.delimiter,
            has_header: !self.no_header,
            missing_policy: match self.missing_policy {
                MissingPolicyArg::Strict => MissingPolicy::Strict,
                MissingPolicyArg::Intersect => MissingPolicy::Intersect,
            },
            duplicate_policy: match self.duplicate_policy {
                DuplicatePolicyArg::Strict => DuplicatePolicy::Strict,
                DuplicatePolicyArg::Lenient => DuplicatePolicy::Lenient,
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MissingPolicyArg {
    Strict,
    Intersect,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum DuplicatePolicyArg {
    Strict,
    Lenient,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    /// Summary block (plus detail listing when filtering)
    Text,
    /// Complete machine-readable document with chart data
    Json,
    /// Per-reference detail rows as CSV
    CsvDetail,
    /// Self-contained page with charts and detail table
    Html,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum DirectionArg {
    Forward,
    Reverse,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CaseArg {
    Unchanged,
    Merged,
    Partitioned,
    Overlapping,
    /// Keep every case (same as no filter)
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SweepFormatArg {
    Text,
    Csv,
}

#[derive(Args)]
struct CompareArgs {
    /// Merged three-column file, or the baseline half of a split pair
    file1: PathBuf,
    /// Counterpart half of a split pair (two columns per file)
    file2: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Only list references whose cluster falls into these cases
    #[arg(long, value_enum, value_delimiter = ',')]
    filter_case: Vec<CaseArg>,
    /// Which direction's case the filter tests
    #[arg(long, value_enum, default_value_t = DirectionArg::Both)]
    direction: DirectionArg,
    /// Cap the number of detail rows
    #[arg(long)]
    max_detail_rows: Option<usize>,
    /// Decimal places for TWI in text output
    #[arg(long)]
    twi_precision: Option<u8>,
    /// Write the report here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    ingest: IngestFlags,
}

#[derive(Args)]
struct SweepArgs {
    /// Baseline clustering (two columns: reference id, cluster)
    baseline: PathBuf,
    /// Variant clusterings to compare against the baseline, in table order
    #[arg(required = true, num_args = 1..)]
    variants: Vec<PathBuf>,
    /// Row labels, comma-separated, one per variant (default: file stems)
    #[arg(long, value_delimiter = ',')]
    labels: Vec<String>,
    /// Baseline name shown in the table title (default: file stem)
    #[arg(long)]
    baseline_label: Option<String>,
    /// Output format
    #[arg(long, value_enum, default_value_t = SweepFormatArg::Text)]
    format: SweepFormatArg,
    /// Stop at the first variant that fails instead of continuing
    #[arg(long)]
    fail_fast: bool,
    /// Write the table here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    ingest: IngestFlags,
}

#[derive(Args)]
struct ValidateArgs {
    /// Merged three-column file, or the baseline half of a split pair
    file1: PathBuf,
    /// Counterpart half of a split pair
    file2: Option<PathBuf>,
    #[command(flatten)]
    ingest: IngestFlags,
}

#[derive(Args)]
struct GenArgs {
    /// Number of references in the fixture
    #[arg(long, default_value_t = 100)]
    references: usize,
    /// Upper bound on the number of baseline clusters
    #[arg(long, default_value_t = 20)]
    clusters: usize,
    /// RNG seed; equal seeds reproduce the fixture exactly
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of cluster pairs to merge
    #[arg(long, default_value_t = 0)]
    merges: usize,
    /// Number of clusters to split in two
    #[arg(long, default_value_t = 0)]
    splits: usize,
    /// Number of single-reference moves between clusters
    #[arg(long, default_value_t = 0)]
    moves: usize,
    /// Output file (merged three-column layout)
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Compare(args) => cmd_compare(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Validate(args) => cmd_validate(args),
        Command::Gen(args) => cmd_gen(args),
    }
}

fn print_warnings(warnings: &[String]) {
    for warning in warnings {
        eprintln!("warning: {warning}");
    }
}

/// Writes to `--out` when given, standard output otherwise.
fn emit(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content).map_err(|source| CliError::Write {
            path: path.display().to_string(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .map_err(|source| CliError::Write {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

fn load_pair(
    file1: &Path,
    file2: Option<&Path>,
    options: &IngestOptions,
) -> Result<LoadedPair, CliError> {
    let pair = match file2 {
        None => load_merged(file1, options)?,
        Some(file2) => load_split(file1, file2, options)?,
    };
    Ok(pair)
}

fn report_options(args: &CompareArgs) -> ReportOptions {
    // `--filter-case all` still requests a detail listing; it just matches
    // every case.
    let mut filter: BTreeSet<CaseKind> = args
        .filter_case
        .iter()
        .filter_map(|case| match case {
            CaseArg::Unchanged => Some(CaseKind::Unchanged),
            CaseArg::Merged => Some(CaseKind::Merged),
            CaseArg::Partitioned => Some(CaseKind::Partitioned),
            CaseArg::Overlapping => Some(CaseKind::Overlapping),
            CaseArg::All => None,
        })
        .collect();
    if args.filter_case.contains(&CaseArg::All) {
        filter.extend(CaseKind::ALL);
    }
    ReportOptions {
        case_filter: if args.filter_case.is_empty() {
            None
        } else {
            Some(filter)
        },
        direction: match args.direction {
            DirectionArg::Forward => DirectionFilter::Forward,
            DirectionArg::Reverse => DirectionFilter::Reverse,
            DirectionArg::Both => DirectionFilter::Both,
        },
        max_detail_rows: args.max_detail_rows,
        twi_precision: args.twi_precision,
    }
}

fn cmd_compare(args: CompareArgs) -> Result<(), CliError> {
    let ingest_options = args.ingest.to_options();
    let pair = load_pair(&args.file1, args.file2.as_deref(), &ingest_options)?;
    print_warnings(&pair.warnings);
    let result = compare(&pair.baseline, &pair.counterpart)?;
    let options = report_options(&args);
    let output = match args.format {
        FormatArg::Text => {
            let mut text = render_summary(&result, &options);
            // A case filter is a request to see the matching rows, so the
            // text report grows a detail section.
            if options.case_filter.is_some() {
                text.push('\n');
                text.push_str(&render_detail(&result, &options));
            }
            text
        }
        FormatArg::Json => export_json(&result),
        FormatArg::CsvDetail => render_detail_csv(&result, &options),
        FormatArg::Html => export_html(&result, &options),
    };
    emit(args.out.as_deref(), &output)
}

fn stem_of(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn cmd_sweep(args: SweepArgs) -> Result<(), CliError> {
    let ingest_options = args.ingest.to_options();
    if !args.labels.is_empty() && args.labels.len() != args.variants.len() {
        return Err(CliError::LabelCount {
            given: args.labels.len(),
            needed: args.variants.len(),
        });
    }
    let labels: Vec<String> = if args.labels.is_empty() {
        args.variants.iter().map(|p| stem_of(p)).collect()
    } else {
        args.labels.clone()
    };
    let baseline_label = args
        .baseline_label
        .clone()
        .unwrap_or_else(|| stem_of(&args.baseline));

    let (baseline, warnings) = load_clustering(&args.baseline, Side::Baseline, &ingest_options)?;
    print_warnings(&warnings);
    let baseline_name = args.baseline.display().to_string();

    // Compare the variants in parallel; collect() keeps input order, so row
    // order never depends on completion order.
    let outcomes: Vec<Result<(SweepRow, Vec<String>), CliError>> = args
        .variants
        .par_iter()
        .zip(labels.par_iter())
        .map(|(path, label)| {
            let (variant, mut warnings) =
                load_clustering(path, Side::Counterpart, &ingest_options)?;
            let variant_name = path.display().to_string();
            let result = if baseline.same_reference_set(&variant) {
                compare(&baseline, &variant)?
            } else {
                match ingest_options.missing_policy {
                    MissingPolicy::Strict => {
                        check_same_references(&baseline, &variant, &baseline_name, &variant_name)?;
                        unreachable!("mismatched reference sets fail the strict check");
                    }
                    MissingPolicy::Intersect => {
                        let (b, v, more) = intersect_references(
                            &baseline,
                            &variant,
                            &baseline_name,
                            &variant_name,
                        )?;
                        warnings.extend(more);
                        compare(&b, &v)?
                    }
                }
            };
            Ok((SweepRow::from_result(label.clone(), &result), warnings))
        })
        .collect();

    let total = outcomes.len();
    let mut rows = Vec::with_capacity(total);
    let mut failed = 0usize;
    for (path, outcome) in args.variants.iter().zip(outcomes) {
        match outcome {
            Ok((row, warnings)) => {
                print_warnings(&warnings);
                rows.push(row);
            }
            Err(error) => {
                eprintln!("error: {}: {error}", path.display());
                failed += 1;
                if args.fail_fast {
                    break;
                }
            }
        }
    }

    if !rows.is_empty() {
        let table = match args.format {
            SweepFormatArg::Text => render_sweep(&rows, &baseline_label),
            SweepFormatArg::Csv => render_sweep_csv(&rows),
        };
        emit(args.out.as_deref(), &table)?;
    }
    if failed > 0 {
        return Err(CliError::SweepFailures { failed, total });
    }
    Ok(())
}

fn cmd_validate(args: ValidateArgs) -> Result<(), CliError> {
    let ingest_options = args.ingest.to_options();
    match &args.file2 {
        None => {
            let pair = load_merged(&args.file1, &ingest_options)?;
            print_warnings(&pair.warnings);
            println!(
                "{} references, ER1: {} clusters ({} singletons), ER2: {} clusters ({} singletons)",
                pair.baseline.reference_count(),
                pair.baseline.cluster_count(),
                pair.baseline.singleton_count(),
                pair.counterpart.cluster_count(),
                pair.counterpart.singleton_count(),
            );
            Ok(())
        }
        Some(file2) => {
            let (baseline, warnings) =
                load_clustering(&args.file1, Side::Baseline, &ingest_options)?;
            print_warnings(&warnings);
            let (counterpart, warnings) =
                load_clustering(file2, Side::Counterpart, &ingest_options)?;
            print_warnings(&warnings);
            for (name, side, clustering) in [
                (&args.file1, "ER1", &baseline),
                (file2, "ER2", &counterpart),
            ] {
                println!(
                    "{}: {} references, {side}: {} clusters ({} singletons)",
                    name.display(),
                    clustering.reference_count(),
                    clustering.cluster_count(),
                    clustering.singleton_count(),
                );
            }
            check_same_references(
                &baseline,
                &counterpart,
                &args.file1.display().to_string(),
                &file2.display().to_string(),
            )?;
            Ok(())
        }
    }
}

fn cmd_gen(args: GenArgs) -> Result<(), CliError> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(args.seed);
    let baseline = random_clustering(
        &mut rng,
        Side::Baseline,
        args.references.max(1),
        args.clusters.max(1),
    );
    let edits = random_edit_script(&mut rng, &baseline, args.merges, args.splits, args.moves);
    let (counterpart, expected) = perturb(&baseline, &edits)?;
    clusterdiff::ingest::write_merged(&args.out, &baseline, &counterpart)?;
    println!(
        "wrote {}: {} references, {} baseline clusters, {} edits; expected forward counts: unchanged={} merged={} partitioned={} overlapping={}",
        args.out.display(),
        baseline.reference_count(),
        baseline.cluster_count(),
        edits.len(),
        expected.unchanged,
        expected.merged,
        expected.partitioned,
        expected.overlapping,
    );
    Ok(())
}
