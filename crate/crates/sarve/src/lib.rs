//! Socially-aware recommendation of conference presentation sessions, plus an
//! offline evaluation harness.
//!
//! The engine matches participants to presentation sessions along two
//! independent streams:
//!
//! * **social context** — Pearson correlation between the tagged-keyword
//!   rating vectors of a participant and a presenter, gated by a threshold
//!   `gamma`, then post-filtered by location/time availability;
//! * **social relations** — contact-based tie strength
//!   `(frequency x duration) / time_frame` gated by a threshold `beta`, OR
//!   presenter popularity measured as degree centrality, then post-filtered
//!   by the same availability predicate.
//!
//! The evaluation side provides seeded train/test splits, confusion-matrix
//! scoring over the full participant x session decision universe,
//! precision/recall/f-measure, threshold sweeps, and two ablation baselines
//! (`pearson-only`, `popularity-only`).
//!
//! Datasets travel in a canonical line-oriented text format (see [`format`])
//! so that runs are diffable and byte-reproducible. A synthetic dataset
//! generator ([`generator`]) produces schema-valid conference datasets with
//! latent interest clusters that double as relevance ground truth.

pub mod context;
pub mod domain;
pub mod eval;
pub mod format;
pub mod generator;
pub mod recommend;
pub mod similarity;
pub mod social;

pub use domain::{validate_dataset, Dataset, Thresholds};
pub use recommend::{resolve_conflicts, run_sarve, RecommendationSet};

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Malformed dataset file; reports the offending line.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// The dataset violates its schema invariants.
    #[error("dataset failed validation:\n{0}")]
    InvalidDataset(String),

    /// Person lookup failed.
    #[error("unknown person `{0}`")]
    UnknownPerson(String),

    /// Mean rating requested for a person with no ratings.
    #[error("person `{0}` has no ratings; mean rating is undefined")]
    UndefinedMean(String),

    /// The contact log carries a non-positive time frame.
    #[error("time frame T must be positive (got {0})")]
    InvalidTimeFrame(u32),

    /// A threshold or configuration value is outside its legal range.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A participant cannot be stratified into train and test.
    #[error("cannot stratify split: participant `{0}` has no rating records")]
    TooSmallToStratify(String),

    /// Generated sessions do not fit the available rooms and time frame.
    #[error("session packing exceeds capacity: {0}")]
    Capacity(String),

    /// Ground-truth labels were requested but the dataset carries none.
    #[error("dataset carries no relevance labels; use truth mode `paper` or a labeled dataset")]
    MissingLabels,

    /// An internal cross-check failed. This indicates a bug, not bad input.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
