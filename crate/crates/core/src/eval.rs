//! Localization quality against known faults: where the faulty statement
//! lands in the ranking and whether it makes the top N.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::ingest::normalize_path;
use crate::metrics::MetricId;
use crate::model::{ElementKind, SpectraSet};
use crate::num::Scalar;
use crate::ranking::{assign_ranks, Rank, TieStrategy};

pub const DEFAULT_TOP_N: [usize; 4] = [1, 3, 5, 10];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FaultLocation {
    Line { file: String, line: u32 },
    Element(String),
}

impl fmt::Display for FaultLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FaultLocation::Line { file, line } => write!(f, "{file}:{line}"),
            FaultLocation::Element(id) => f.write_str(id),
        }
    }
}

impl FromStr for FaultLocation {
    type Err = std::convert::Infallible;

    /// `file:line`, or any other string taken as an element id.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        Ok(match s.rsplit_once(':') {
            Some((file, line)) if !file.is_empty() && !file.ends_with(':') => match line.parse() {
                Ok(line) => FaultLocation::Line {
                    file: normalize_path(file),
                    line,
                },
                Err(_) => FaultLocation::Element(s.to_string()),
            },
            _ => FaultLocation::Element(s.to_string()),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruth {
    pub faults: Vec<FaultLocation>,
}

impl GroundTruth {
    /// Parses a comma-separated list such as `example.py:11,util.py:4`.
    pub fn parse(spec: &str) -> Result<Self> {
        let faults: Vec<FaultLocation> = spec
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.parse().expect("infallible"))
            .collect();
        if faults.is_empty() {
            return Err(Error::UnresolvedTruth(spec.to_string()));
        }
        Ok(GroundTruth { faults })
    }

    /// Statement ids the faults resolve to, in the order given.
    pub fn resolve(&self, spectra: &SpectraSet) -> Result<Vec<String>> {
        self.faults
            .iter()
            .map(|fault| {
                let matches: Vec<&str> = spectra
                    .elements_of(ElementKind::Statement)
                    .filter(|e| match fault {
                        FaultLocation::Line { file, line } => {
                            &e.file == file && e.line <= *line && *line <= e.end_line
                        }
                        FaultLocation::Element(id) => &e.id == id,
                    })
                    .map(|e| e.id.as_str())
                    .collect();
                match matches.as_slice() {
                    [one] => Ok(one.to_string()),
                    _ => Err(Error::UnresolvedTruth(fault.to_string())),
                }
            })
            .collect()
    }
}

/// How one metric ranks the faulty statement at statement granularity.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalVerdict<T> {
    pub metric: MetricId,
    /// Best-ranked faulty statement.
    pub faulty_element: String,
    pub score: T,
    pub min_rank: Rank,
    pub avg_rank: Rank,
    pub max_rank: Rank,
    /// `(N, hit)` for each requested N; a hit means min rank ≤ N.
    pub top_n_hit: Vec<(usize, bool)>,
    pub list_length: usize,
}

impl<T> EvalVerdict<T> {
    pub fn hit(&self, n: usize) -> Option<bool> {
        self.top_n_hit.iter().find(|(k, _)| *k == n).map(|(_, h)| *h)
    }
}

pub fn evaluate<T: Scalar>(
    spectra: &SpectraSet,
    truth: &GroundTruth,
    metrics: &[MetricId],
    n_values: &[usize],
) -> Result<Vec<EvalVerdict<T>>> {
    if metrics.is_empty() {
        return Err(Error::EmptyMetricList);
    }
    let faulty = truth.resolve(spectra)?;
    let counts = spectra.counts_at(ElementKind::Statement);
    let n_values = if n_values.is_empty() { &DEFAULT_TOP_N[..] } else { n_values };

    Ok(metrics
        .iter()
        .map(|metric| {
            let scores: Vec<_> = counts.iter().map(|(id, &c)| (id.clone(), metric.evaluate::<T>(c))).collect();
            let rank_of = |tie: TieStrategy, id: &str| {
                assign_ranks(&scores, tie)
                    .into_iter()
                    .find(|e| e.element_id == id)
                    .map(|e| (e.rank, e.score.value))
                    .expect("faulty statement is scored")
            };
            let best = faulty
                .iter()
                .min_by_key(|id| rank_of(TieStrategy::Min, id).0)
                .expect("truth is non-empty");
            let (min_rank, score) = rank_of(TieStrategy::Min, best);
            EvalVerdict {
                metric: *metric,
                faulty_element: best.clone(),
                score,
                min_rank,
                avg_rank: rank_of(TieStrategy::Average, best).0,
                max_rank: rank_of(TieStrategy::Max, best).0,
                top_n_hit: n_values.iter().map(|&n| (n, min_rank <= n as u64)).collect(),
                list_length: scores.len(),
            }
        })
        .collect())
}
