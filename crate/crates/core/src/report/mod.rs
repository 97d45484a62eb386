//! Report configuration and the renderers (terminal table, JSON, HTML).

mod html;
mod json;
mod table;
mod verdict;

use std::path::PathBuf;
use std::str::FromStr;

pub use html::{render_html, HtmlReport};
pub use json::{format_score, render_json};
pub use table::render_table;
pub use verdict::{render_eval_json, render_eval_table};

use crate::analysis::analyze;
use crate::error::{Error, Result};
use crate::metrics::MetricId;
use crate::model::{Granularity, SpectraSet};
use crate::num::Scalar;
use crate::ranking::{top_n, RankedList, TieStrategy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Table,
    Json,
    Html,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "table" | "text" => Ok(Format::Table),
            "json" => Ok(Format::Json),
            "html" => Ok(Format::Html),
            other => Err(format!("unknown format `{other}` (expected table, json or html)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// One document, or several shards to merge.
    pub spectra_paths: Vec<PathBuf>,
    pub metrics: Vec<MetricId>,
    pub granularity: Granularity,
    pub tie: TieStrategy,
    pub top_n: Option<usize>,
    pub format: Format,
    pub output_path: Option<PathBuf>,
    /// Directory the element paths are relative to, for source listings.
    pub source_root: Option<PathBuf>,
    /// ANSI color in the terminal table.
    pub color: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            spectra_paths: Vec::new(),
            metrics: MetricId::ALL.to_vec(),
            granularity: Granularity::Statement,
            tie: TieStrategy::Min,
            top_n: None,
            format: Format::Table,
            output_path: None,
            source_root: None,
            color: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.metrics.is_empty() {
            return Err(Error::EmptyMetricList);
        }
        if self.top_n == Some(0) {
            return Err(Error::schema("--top", "must be at least 1"));
        }
        Ok(())
    }
}

/// Ranked lists for every selected metric, truncated to the configured top N.
pub fn build_lists<T: Scalar>(spectra: &SpectraSet, config: &RunConfig) -> Result<Vec<RankedList<T>>> {
    config.validate()?;
    let lists = analyze(spectra, &config.metrics, config.granularity, config.tie)?;
    Ok(match config.top_n {
        Some(n) => lists.iter().map(|l| top_n(l, n)).collect(),
        None => lists,
    })
}

pub const TINT_LEVELS: u8 = 10;

/// Maps scores to discrete tint levels `0..TINT_LEVELS`.
///
/// Scores are normalized linearly between 0 and the largest finite score
/// of the list. Scores at or below 0 get level 0 (no tint), `+inf` and the
/// maximum get the darkest level.
#[derive(Debug, Clone, Copy)]
pub struct TintScale {
    max: f64,
}

impl TintScale {
    pub fn new<T: Scalar>(scores: impl IntoIterator<Item = T>) -> Self {
        let max = scores
            .into_iter()
            .map(Scalar::to_f64_lossy)
            .filter(|v| v.is_finite())
            .fold(0.0, f64::max);
        TintScale { max }
    }

    pub fn level<T: Scalar>(&self, score: T) -> u8 {
        let v = score.to_f64_lossy();
        let top = TINT_LEVELS - 1;
        if v.is_infinite() && v > 0.0 {
            return top;
        }
        if v <= 0.0 || self.max <= 0.0 {
            return 0;
        }
        let scaled = (v / self.max * f64::from(top)).ceil();
        scaled.clamp(1.0, f64::from(top)) as u8
    }
}
