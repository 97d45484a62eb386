//! Rank assignment with tie handling, hierarchical ranked lists and top-N
//! truncation.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::metrics::{MetricId, Score};
use crate::model::{ElementKind, Granularity, SpectraSet};
use crate::num::{tie_key, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TieStrategy {
    /// Every member of a tie group gets the group's best position.
    #[default]
    Min,
    /// Every member gets the group's worst position.
    Max,
    /// Every member gets the midpoint of the group's positions.
    Average,
}

impl TieStrategy {
    pub const ALL: [TieStrategy; 3] = [TieStrategy::Min, TieStrategy::Max, TieStrategy::Average];

    pub fn as_str(self) -> &'static str {
        match self {
            TieStrategy::Min => "min",
            TieStrategy::Max => "max",
            TieStrategy::Average => "average",
        }
    }
}

impl fmt::Display for TieStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TieStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "min" => Ok(TieStrategy::Min),
            "max" => Ok(TieStrategy::Max),
            "average" | "avg" | "mean" => Ok(TieStrategy::Average),
            other => Err(format!("unknown tie strategy `{other}` (expected min, max or average)")),
        }
    }
}

/// 1-based rank position. Average ties can land on halves, so ranks are
/// kept as exact rationals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rank(Ratio<u64>);

impl Rank {
    pub fn new(position: u64) -> Self {
        Rank(Ratio::from_integer(position))
    }

    fn for_group(first: u64, last: u64, tie: TieStrategy) -> Self {
        match tie {
            TieStrategy::Min => Rank::new(first),
            TieStrategy::Max => Rank::new(last),
            TieStrategy::Average => Rank(Ratio::new(first + last, 2)),
        }
    }

    pub fn value(&self) -> Ratio<u64> {
        self.0
    }

    pub fn as_f64(&self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.to_integer())
        } else {
            // denominators are at most 2
            write!(f, "{}.5", self.0.to_integer())
        }
    }
}

impl PartialEq<u64> for Rank {
    fn eq(&self, other: &u64) -> bool {
        self.0 == Ratio::from_integer(*other)
    }
}

impl PartialOrd<u64> for Rank {
    fn partial_cmp(&self, other: &u64) -> Option<Ordering> {
        self.0.partial_cmp(&Ratio::from_integer(*other))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredElement<T> {
    pub element_id: String,
    pub score: Score<T>,
    pub rank: Rank,
}

/// Orders scores from most to least suspicious, comparing tie keys.
fn descending<T: Scalar>(a: T, b: T) -> Ordering {
    tie_key(b).total_cmp(&tie_key(a))
}

/// Ranks scores from most to least suspicious. Elements that tie keep their
/// input order in the output.
pub fn assign_ranks<T: Scalar>(scores: &[(String, Score<T>)], tie: TieStrategy) -> Vec<ScoredElement<T>> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| descending(scores[a].1.value, scores[b].1.value));

    let mut out = Vec::with_capacity(scores.len());
    let mut start = 0;
    while start < order.len() {
        let key = tie_key(scores[order[start]].1.value);
        let mut end = start + 1;
        while end < order.len() && tie_key(scores[order[end]].1.value) == key {
            end += 1;
        }
        let rank = Rank::for_group(start as u64 + 1, end as u64, tie);
        out.extend(order[start..end].iter().map(|&i| ScoredElement {
            element_id: scores[i].0.clone(),
            score: scores[i].1,
            rank,
        }));
        start = end;
    }
    out
}

/// Ranks one level of elements; ties are displayed in (file, line) order.
pub fn rank_level<T: Scalar>(
    spectra: &SpectraSet,
    scores: &IndexMap<String, Score<T>>,
    tie: TieStrategy,
) -> Vec<ScoredElement<T>> {
    let mut input: Vec<(String, Score<T>)> = scores.iter().map(|(id, s)| (id.clone(), *s)).collect();
    input.sort_by(|(a, _), (b, _)| {
        let loc = |id: &str| spectra.element(id).map(|e| (e.file.clone(), e.line));
        loc(a).cmp(&loc(b)).then_with(|| a.cmp(b))
    });
    assign_ranks(&input, tie)
}

/// A node of the class → method → statement tree.
#[derive(Debug, Clone, PartialEq)]
pub struct HierNode<T> {
    pub element_id: String,
    pub kind: ElementKind,
    pub score: Score<T>,
    pub rank: Rank,
    pub children: Vec<HierNode<T>>,
}

impl<T> HierNode<T> {
    /// Pre-order traversal.
    pub fn walk<'a>(&'a self, visit: &mut impl FnMut(&'a HierNode<T>, usize), depth: usize) {
        visit(self, depth);
        for child in &self.children {
            child.walk(visit, depth + 1);
        }
    }
}

/// Nodes to display down to `granularity`. Synthetic enclosures are
/// replaced by their children.
pub fn visible_nodes<'a, T>(
    nodes: &'a [HierNode<T>],
    spectra: &SpectraSet,
    granularity: Granularity,
) -> Vec<&'a HierNode<T>> {
    let mut out = Vec::new();
    for n in nodes {
        if n.kind.depth() > granularity.depth() {
            continue;
        }
        if spectra.element(&n.element_id).is_some_and(|e| e.synthetic) {
            out.extend(visible_nodes(&n.children, spectra, granularity));
        } else {
            out.push(n);
        }
    }
    out
}

/// Ranked elements of every level, keyed by level.
pub type LevelRanks<T> = BTreeMap<Granularity, Vec<ScoredElement<T>>>;

#[derive(Debug, Clone, PartialEq)]
pub struct RankedList<T> {
    pub metric: MetricId,
    pub granularity: Granularity,
    pub tie: TieStrategy,
    /// Sorted by non-increasing score.
    pub entries: Vec<ScoredElement<T>>,
    pub hierarchy: Option<Vec<HierNode<T>>>,
}

/// Nests each level under its parents. Siblings keep their level's ranked
/// order, so all statements of a higher ranked method come before those of
/// a lower ranked one.
pub fn build_hierarchical<T: Scalar>(levels: &LevelRanks<T>, spectra: &SpectraSet) -> Result<Vec<HierNode<T>>> {
    let mut position: HashMap<&str, (usize, &ScoredElement<T>)> = HashMap::new();
    for kind in ElementKind::ALL {
        let list = levels.get(&kind).ok_or(Error::MissingGranularity(kind))?;
        for (i, e) in list.iter().enumerate() {
            position.insert(e.element_id.as_str(), (i, e));
        }
    }

    fn node<T: Scalar>(
        id: &str,
        spectra: &SpectraSet,
        position: &HashMap<&str, (usize, &ScoredElement<T>)>,
    ) -> Result<HierNode<T>> {
        let element = spectra.element(id).expect("id comes from the spectra");
        let (_, scored) = position
            .get(id)
            .ok_or(Error::MissingGranularity(element.kind))?;
        let mut children = spectra
            .children(id)
            .map(|c| {
                let pos = position
                    .get(c.id.as_str())
                    .map(|p| p.0)
                    .ok_or(Error::MissingGranularity(c.kind))?;
                Ok((pos, c.id.as_str()))
            })
            .collect::<Result<Vec<_>>>()?;
        children.sort_unstable();
        Ok(HierNode {
            element_id: id.to_string(),
            kind: element.kind,
            score: scored.score,
            rank: scored.rank,
            children: children
                .into_iter()
                .map(|(_, c)| node(c, spectra, position))
                .collect::<Result<_>>()?,
        })
    }

    levels[&ElementKind::Class]
        .iter()
        .map(|c| node(&c.element_id, spectra, &position))
        .collect()
}

/// Statement ids in hierarchical examination order.
pub fn flatten_statements<T>(tree: &[HierNode<T>]) -> Vec<&str> {
    let mut out = Vec::new();
    for root in tree {
        root.walk(
            &mut |n, _| {
                if n.kind == ElementKind::Statement {
                    out.push(n.element_id.as_str());
                }
            },
            0,
        );
    }
    out
}

/// First `n` entries. A tie group straddling the cut is kept whole, so the
/// result can be longer than `n`.
pub fn top_n<T: Scalar>(list: &RankedList<T>, n: usize) -> RankedList<T> {
    let mut keep = n.min(list.entries.len());
    if keep > 0 {
        let boundary = tie_key(list.entries[keep - 1].score.value);
        while keep < list.entries.len() && tie_key(list.entries[keep].score.value) == boundary {
            keep += 1;
        }
    }
    let entries: Vec<ScoredElement<T>> = list.entries[..keep].to_vec();
    let kept: HashSet<&str> = entries.iter().map(|e| e.element_id.as_str()).collect();

    fn prune<T: Clone>(nodes: &[HierNode<T>], level: Granularity, kept: &HashSet<&str>) -> Vec<HierNode<T>> {
        nodes
            .iter()
            .filter_map(|n| match n.kind.depth().cmp(&level.depth()) {
                Ordering::Less => {
                    let children = prune(&n.children, level, kept);
                    (!children.is_empty()).then(|| HierNode {
                        children,
                        ..n.clone()
                    })
                }
                _ => kept.contains(n.element_id.as_str()).then(|| n.clone()),
            })
            .collect()
    }

    RankedList {
        metric: list.metric,
        granularity: list.granularity,
        tie: list.tie,
        hierarchy: list.hierarchy.as_ref().map(|h| prune(h, list.granularity, &kept)),
        entries,
    }
}
