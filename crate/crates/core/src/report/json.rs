use serde::Serialize;
use serde_json::value::RawValue;

use super::RunConfig;
use crate::model::{Granularity, SpectraSet};
use crate::num::Scalar;
use crate::ranking::{visible_nodes, HierNode, RankedList};

#[derive(Serialize)]
struct Document<'a> {
    schema_version: &'static str,
    reports: Vec<Section<'a>>,
}

#[derive(Serialize)]
struct Section<'a> {
    metric: String,
    granularity: &'static str,
    tie: &'static str,
    top_n: Option<usize>,
    entries: Vec<Entry<'a>>,
    hierarchy: Vec<Node<'a>>,
}

#[derive(Serialize)]
struct Entry<'a> {
    id: &'a str,
    name: &'a str,
    file: &'a str,
    line: u32,
    score: Box<RawValue>,
    rank: Box<RawValue>,
}

#[derive(Serialize)]
struct Node<'a> {
    id: &'a str,
    kind: &'static str,
    name: &'a str,
    file: &'a str,
    line: u32,
    score: Box<RawValue>,
    rank: Box<RawValue>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    children: Vec<Node<'a>>,
}

/// Six decimals, `"inf"` for `+inf`, and no negative zero.
pub fn format_score<T: Scalar>(value: T) -> String {
    let v = value.to_f64_lossy();
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let v = if v == 0.0 { 0.0 } else { v };
    let s = format!("{v:.6}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        "0.000000".into()
    } else {
        s
    }
}

fn score_value<T: Scalar>(value: T) -> Box<RawValue> {
    let s = format_score(value);
    let json = if s.ends_with("inf") { format!("\"{s}\"") } else { s };
    RawValue::from_string(json).expect("formatted score is valid JSON")
}

fn raw(s: String) -> Box<RawValue> {
    RawValue::from_string(s).expect("valid JSON literal")
}

fn node<'a, T: Scalar>(n: &'a HierNode<T>, spectra: &'a SpectraSet, granularity: Granularity) -> Node<'a> {
    let e = spectra.element(&n.element_id).expect("ranked ids exist");
    Node {
        id: &e.id,
        kind: e.kind.as_str(),
        name: &e.display_name,
        file: &e.file,
        line: e.line,
        score: score_value(n.score.value),
        rank: raw(n.rank.to_string()),
        children: visible_nodes(&n.children, spectra, granularity)
            .into_iter()
            .map(|c| node(c, spectra, granularity))
            .collect(),
    }
}

/// Stable JSON: one section per metric with the flat entries and the tree
/// down to the selected granularity.
pub fn render_json<T: Scalar>(lists: &[RankedList<T>], spectra: &SpectraSet, config: &RunConfig) -> String {
    let reports = lists
        .iter()
        .map(|list| Section {
            metric: list.metric.to_string(),
            granularity: list.granularity.as_str(),
            tie: list.tie.as_str(),
            top_n: config.top_n,
            entries: list
                .entries
                .iter()
                .map(|s| {
                    let e = spectra.element(&s.element_id).expect("ranked ids exist");
                    Entry {
                        id: &e.id,
                        name: &e.display_name,
                        file: &e.file,
                        line: e.line,
                        score: score_value(s.score.value),
                        rank: raw(s.rank.to_string()),
                    }
                })
                .collect(),
            hierarchy: list
                .hierarchy
                .as_deref()
                .map(|tree| visible_nodes(tree, spectra, list.granularity))
                .unwrap_or_default()
                .into_iter()
                .map(|n| node(n, spectra, list.granularity))
                .collect(),
        })
        .collect();
    let mut out = serde_json::to_string_pretty(&Document {
        schema_version: "1.0",
        reports,
    })
    .expect("report serializes");
    out.push('\n');
    out
}
