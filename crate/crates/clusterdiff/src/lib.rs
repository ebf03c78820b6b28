//! Compare two clusterings of the same reference set.
//!
//! Entity-resolution processes group references into clusters; re-running a
//! process with different parameters, or running a different process, yields
//! a second clustering of the same references. This crate measures how the
//! two outcomes differ without needing ground truth: every cluster of one
//! outcome is classified as unchanged, merged, partitioned, or overlapping
//! relative to the other outcome, and the Talburt-Wang index (TWI) condenses
//! the overlap structure into a single similarity value in (0, 1].
//!
//! The pipeline is: load two [`Clustering`]s (see [`ingest`]), run
//! [`metrics::compare`], then render the [`ComparisonResult`] through the
//! [`report`] module as text, CSV, JSON, or a standalone HTML page.
//!
//! ```
//! use clusterdiff::{metrics, ClusterId, Clustering, ReferenceId, Side};
//!
//! fn load(side: Side, rows: &[(&str, &str)]) -> Clustering {
//!     let pairs = rows.iter().map(|(r, c)| {
//!         (
//!             ReferenceId::new(r).unwrap(),
//!             ClusterId::new(side, c).unwrap(),
//!         )
//!     });
//!     Clustering::from_pairs(side, pairs).unwrap()
//! }
//!
//! // One process kept records 1 and 2 apart; the other merged them.
//! let before = load(Side::Baseline, &[("1", "a"), ("2", "b"), ("3", "c")]);
//! let after = load(Side::Counterpart, &[("1", "ab"), ("2", "ab"), ("3", "c")]);
//!
//! let result = metrics::compare(&before, &after).unwrap();
//! assert_eq!(result.forward.merged, 2);
//! assert_eq!(result.forward.unchanged, 1);
//! assert!(result.twi < 1.0);
//! ```

pub mod classify;
pub mod ingest;
pub mod metrics;
pub mod model;
pub mod oracle;
pub mod report;

#[cfg(test)]
pub(crate) mod testutil;

pub use model::{
    CaseClassification, CaseCounts, CaseKind, ClusterId, Clustering, ComparisonResult, Direction,
    MemberSet, ModelError, Profile, ReferenceId, Side, SweepRow,
};
