//! Suspiciousness formulas over the four basic statistics.
//!
//! Degenerate denominators never produce NaN: a ratio whose denominator is
//! zero counts as 0, so an element no failing test executes is minimally
//! suspicious. The one exception is D*, where `ef > 0` over a zero
//! denominator yields `+inf`.

use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::model::SpectrumCounts;
use crate::num::Scalar;

pub const DEFAULT_DSTAR_EXPONENT: u32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MetricKind {
    Tarantula,
    Ochiai,
    DStar,
    Wong2,
}

/// A metric together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MetricId {
    pub kind: MetricKind,
    /// D* exponent; ignored by the other metrics.
    pub star: u32,
}

impl MetricId {
    pub const TARANTULA: MetricId = MetricId::new(MetricKind::Tarantula);
    pub const OCHIAI: MetricId = MetricId::new(MetricKind::Ochiai);
    pub const DSTAR: MetricId = MetricId::new(MetricKind::DStar);
    pub const WONG2: MetricId = MetricId::new(MetricKind::Wong2);

    /// The four supported metrics, D* with its default exponent.
    pub const ALL: [MetricId; 4] = [Self::TARANTULA, Self::OCHIAI, Self::DSTAR, Self::WONG2];

    pub const fn new(kind: MetricKind) -> Self {
        MetricId {
            kind,
            star: DEFAULT_DSTAR_EXPONENT,
        }
    }

    pub fn dstar(star: u32) -> Result<Self> {
        if star == 0 {
            return Err(Error::UnknownMetric("dstar0".into()));
        }
        Ok(MetricId {
            kind: MetricKind::DStar,
            star,
        })
    }

    pub fn evaluate<T: Scalar>(&self, counts: SpectrumCounts) -> Score<T> {
        let value = match self.kind {
            MetricKind::Tarantula => tarantula(counts),
            MetricKind::Ochiai => ochiai(counts),
            MetricKind::DStar => dstar(counts, self.star),
            MetricKind::Wong2 => wong2(counts),
        };
        Score { value, metric: *self }
    }
}

impl fmt::Display for MetricId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            MetricKind::Tarantula => f.write_str("tarantula"),
            MetricKind::Ochiai => f.write_str("ochiai"),
            MetricKind::DStar if self.star == DEFAULT_DSTAR_EXPONENT => f.write_str("dstar"),
            MetricKind::DStar => write!(f, "dstar{}", self.star),
            MetricKind::Wong2 => f.write_str("wong2"),
        }
    }
}

impl FromStr for MetricId {
    type Err = Error;

    /// Case-insensitive; `dstar` takes an optional exponent suffix (`dstar3`).
    fn from_str(s: &str) -> Result<Self> {
        let name = s.trim().to_ascii_lowercase();
        match name.as_str() {
            "tarantula" => Ok(Self::TARANTULA),
            "ochiai" => Ok(Self::OCHIAI),
            "wong2" => Ok(Self::WONG2),
            "dstar" => Ok(Self::DSTAR),
            _ => match name.strip_prefix("dstar").map(str::parse::<u32>) {
                Some(Ok(star)) if star >= 1 => MetricId::dstar(star),
                _ => Err(Error::UnknownMetric(s.trim().to_string())),
            },
        }
    }
}

/// Parses metric names, accepting comma-separated lists in each item.
pub fn parse_metrics<S: AsRef<str>>(names: &[S]) -> Result<Vec<MetricId>> {
    let mut out = Vec::new();
    for item in names {
        for name in item.as_ref().split(',').filter(|n| !n.trim().is_empty()) {
            let id: MetricId = name.parse()?;
            if !out.contains(&id) {
                out.push(id);
            }
        }
    }
    if out.is_empty() {
        return Err(Error::EmptyMetricList);
    }
    Ok(out)
}

/// A suspiciousness value. Never NaN; only D* produces `+inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Score<T> {
    pub value: T,
    pub metric: MetricId,
}

fn ratio<T: Scalar>(num: usize, den: usize) -> T {
    if den == 0 {
        T::zero()
    } else {
        T::from_count(num) / T::from_count(den)
    }
}

pub fn tarantula<T: Scalar>(c: SpectrumCounts) -> T {
    let fail: T = ratio(c.ef, c.ef + c.nf);
    let pass: T = ratio(c.ep, c.ep + c.np);
    let den = fail + pass;
    if den == T::zero() {
        T::zero()
    } else {
        fail / den
    }
}

pub fn ochiai<T: Scalar>(c: SpectrumCounts) -> T {
    if c.ef == 0 {
        return T::zero();
    }
    let ef = T::from_count(c.ef);
    ef / (T::from_count(c.ef + c.nf) * T::from_count(c.ef + c.ep)).sqrt()
}

pub fn dstar<T: Scalar>(c: SpectrumCounts, star: u32) -> T {
    let den = c.ep + c.nf;
    if den == 0 {
        return if c.ef > 0 { T::infinity() } else { T::zero() };
    }
    let star = i32::try_from(star).unwrap_or(i32::MAX);
    T::from_count(c.ef).powi(star) / T::from_count(den)
}

pub fn wong2<T: Scalar>(c: SpectrumCounts) -> T {
    T::from_count(c.ef) - T::from_count(c.ep)
}

pub type ScoreTable<T> = IndexMap<String, IndexMap<MetricId, Score<T>>>;

/// Scores every element under every selected metric, preserving element order.
pub fn score_all<T: Scalar>(
    counts: &IndexMap<String, SpectrumCounts>,
    metrics: &[MetricId],
) -> Result<ScoreTable<T>> {
    if metrics.is_empty() {
        return Err(Error::EmptyMetricList);
    }
    Ok(counts
        .iter()
        .map(|(id, &c)| (id.clone(), metrics.iter().map(|m| (*m, m.evaluate(c))).collect()))
        .collect())
}
