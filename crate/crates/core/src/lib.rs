//! Spectrum-based fault localization.
//!
//! Per-test statement coverage and pass/fail outcomes go in; ranked lists of
//! suspicious classes, methods and statements come out. Scores are generic
//! over the float type ([`num::Scalar`]); the aliases below fix it to `f64`.

pub mod analysis;
pub mod error;
pub mod eval;
pub mod ingest;
pub mod metrics;
pub mod model;
pub mod num;
pub mod ranking;
pub mod report;

pub use analysis::analyze;
pub use error::{Error, Result};
pub use eval::{evaluate, FaultLocation, GroundTruth};
pub use ingest::{emit_spectra, load_spectra, merge_runs, parse_spectra, SpectraDocument};
pub use metrics::{MetricId, MetricKind};
pub use model::{
    compute_counts, rollup_coverage, CoverageMatrix, ElementKind, Granularity, Outcome, ProgramElement,
    SpectraSet, SpectrumCounts, TestCase,
};
pub use num::Scalar;
pub use ranking::{assign_ranks, build_hierarchical, top_n, visible_nodes, Rank, TieStrategy};

pub type Score = metrics::Score<f64>;
pub type ScoredElement = ranking::ScoredElement<f64>;
pub type RankedList = ranking::RankedList<f64>;
pub type HierNode = ranking::HierNode<f64>;
pub type EvalVerdict = eval::EvalVerdict<f64>;

pub type Score32 = metrics::Score<f32>;
pub type RankedList32 = ranking::RankedList<f32>;
