//! End-to-end ranking: counts at every level, scores per metric, ranked
//! lists with the class → method → statement tree attached.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::metrics::{score_all, MetricId, ScoreTable};
use crate::model::{ElementKind, Granularity, SpectraSet};
use crate::num::Scalar;
use crate::ranking::{build_hierarchical, rank_level, LevelRanks, RankedList, TieStrategy};

/// Scores of every element at every level, per metric.
pub fn level_scores<T: Scalar>(
    spectra: &SpectraSet,
    metrics: &[MetricId],
) -> Result<BTreeMap<Granularity, ScoreTable<T>>> {
    ElementKind::ALL
        .into_iter()
        .map(|level| Ok((level, score_all(&spectra.counts_at(level), metrics)?)))
        .collect()
}

/// One ranked list per metric, in selection order, at `granularity`.
pub fn analyze<T: Scalar>(
    spectra: &SpectraSet,
    metrics: &[MetricId],
    granularity: Granularity,
    tie: TieStrategy,
) -> Result<Vec<RankedList<T>>> {
    if metrics.is_empty() {
        return Err(Error::EmptyMetricList);
    }
    if !spectra.has_declared(granularity) {
        return Err(Error::UnknownGranularity(granularity));
    }
    let scores = level_scores::<T>(spectra, metrics)?;
    metrics
        .iter()
        .map(|metric| {
            let levels: LevelRanks<T> = scores
                .iter()
                .map(|(&level, table)| {
                    let per_element = table.iter().map(|(id, m)| (id.clone(), m[metric])).collect();
                    (level, rank_level(spectra, &per_element, tie))
                })
                .collect();
            let hierarchy = build_hierarchical(&levels, spectra)?;
            Ok(RankedList {
                metric: *metric,
                granularity,
                tie,
                entries: levels[&granularity].clone(),
                hierarchy: Some(hierarchy),
            })
        })
        .collect()
}
