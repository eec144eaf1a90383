//! tpmine mines temporal patterns from multivariate time series.
//!
//! The pipeline symbolizes raw series, merges identical consecutive symbols
//! into interval events, splits the event streams into (optionally
//! overlapping) temporal sequences, and then mines patterns built from
//! three buffered interval relations (Follows, Contains, Overlaps) under
//! minimum/maximum support and minimum confidence constraints. Mining is
//! either exact (Apriori + transitivity pruning over hierarchical lookup
//! tables) or approximate (series pairs screened by normalized mutual
//! information with analytic support/confidence bounds).
//!
//! Every major capability has a runnable example:
//!
//! ```text
//! cargo run -p tpmine --example running_example   # end-to-end on the bundled dataset
//! cargo run -p tpmine --example relations          # the buffered relation classifier
//! cargo run -p tpmine --example rare_patterns      # rare mode (sigma_max)
//! cargo run -p tpmine --example approximate        # MI screening vs exact mining
//! cargo run -p tpmine --example mi_bounds          # Lambert W and the mu thresholds
//! cargo run -p tpmine --example generate           # synthetic data generation
//! cargo run -p tpmine --example bench_matrix       # the benchmark harness
//! ```
//!
//! The same functionality is reachable through the `tpmine` binary
//! (`mine`, `gen`, `bench` subcommands); see the README for the config and
//! file formats.

pub mod bounds;
pub mod config;
pub mod datagen;
pub mod index;
pub mod io;
pub mod measures;
pub mod mine;
pub mod model;
pub mod oracle;
pub mod report;
pub mod runner;
pub mod transform;

pub use model::{
    classify_relation, sequence_supports, Duration, EventId, EventInstance, Interval,
    MiningConfig, MiningMode, PruningRegime, RelationKind, RelationTriple, SequenceDatabase,
    TemporalPattern, TemporalSequence, TimePoint, Vocab,
};

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid value: {0}")]
    Domain(String),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("ingestion error at row {row}: {message}")]
    Ingest { row: usize, message: String },
    #[error("structural integrity violation: {0}")]
    Integrity(String),
    #[error("infeasible request: {0}")]
    Infeasible(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
