use std::fmt::Write;

use super::{format_score, RunConfig, TintScale};
use crate::model::{Granularity, SpectraSet};
use crate::num::Scalar;
use crate::ranking::{visible_nodes, HierNode, RankedList};

struct Row {
    name: String,
    position: String,
    rank: String,
    score: String,
    tint: u8,
}

const HEADER: [&str; 4] = ["Name", "File:Line", "Rank", "Score"];

fn collect<T: Scalar>(
    n: &HierNode<T>,
    spectra: &SpectraSet,
    scale: &TintScale,
    granularity: Granularity,
    depth: usize,
    rows: &mut Vec<Row>,
) {
    let e = spectra.element(&n.element_id).expect("ranked ids exist");
    rows.push(Row {
        name: format!("{}{}", "  ".repeat(depth), e.display_name),
        position: format!("{}:{}", e.file, e.line),
        rank: n.rank.to_string(),
        score: format_score(n.score.value),
        tint: scale.level(n.score.value),
    });
    for c in visible_nodes(&n.children, spectra, granularity) {
        collect(c, spectra, scale, granularity, depth + 1, rows);
    }
}

fn ansi(tint: u8) -> &'static str {
    match tint {
        0 => "",
        1..=3 => "\x1b[33m",
        4..=6 => "\x1b[31m",
        _ => "\x1b[1;31m",
    }
}

/// Fixed-width text table per metric; nesting is shown by two spaces of
/// indentation per level.
pub fn render_table<T: Scalar>(lists: &[RankedList<T>], spectra: &SpectraSet, config: &RunConfig) -> String {
    let mut out = String::new();
    for (i, list) in lists.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let scale = TintScale::new(list.entries.iter().map(|e| e.score.value));
        let mut rows = Vec::new();
        match &list.hierarchy {
            Some(tree) => {
                for n in visible_nodes(tree, spectra, list.granularity) {
                    collect(n, spectra, &scale, list.granularity, 0, &mut rows);
                }
            }
            None => {
                for s in &list.entries {
                    let e = spectra.element(&s.element_id).expect("ranked ids exist");
                    rows.push(Row {
                        name: e.display_name.clone(),
                        position: format!("{}:{}", e.file, e.line),
                        rank: s.rank.to_string(),
                        score: format_score(s.score.value),
                        tint: scale.level(s.score.value),
                    });
                }
            }
        }

        let width = |col: fn(&Row) -> &str, h: &str| rows.iter().map(|r| col(r).chars().count()).chain([h.len()]).max().unwrap_or(0);
        let w = [
            width(|r| &r.name, HEADER[0]),
            width(|r| &r.position, HEADER[1]),
            width(|r| &r.rank, HEADER[2]),
            width(|r| &r.score, HEADER[3]),
        ];

        let mut title = format!("{} ({}, ties: {}", list.metric, list.granularity, list.tie);
        if let Some(n) = config.top_n {
            let _ = write!(title, ", top {n}");
        }
        title.push(')');
        let _ = writeln!(out, "{title}");
        let _ = writeln!(
            out,
            "{:<w0$} | {:<w1$} | {:>w2$} | {:>w3$}",
            HEADER[0],
            HEADER[1],
            HEADER[2],
            HEADER[3],
            w0 = w[0],
            w1 = w[1],
            w2 = w[2],
            w3 = w[3]
        );
        let _ = writeln!(out, "{}-+-{}-+-{}-+-{}", "-".repeat(w[0]), "-".repeat(w[1]), "-".repeat(w[2]), "-".repeat(w[3]));
        for r in &rows {
            let score = format!("{:>w$}", r.score, w = w[3]);
            let score = match (config.color, ansi(r.tint)) {
                (true, code) if !code.is_empty() => format!("{code}{score}\x1b[0m"),
                _ => score,
            };
            let name_pad = w[0] - r.name.chars().count();
            let _ = writeln!(
                out,
                "{}{} | {:<w1$} | {:>w2$} | {}",
                r.name,
                " ".repeat(name_pad),
                r.position,
                r.rank,
                score,
                w1 = w[1],
                w2 = w[2]
            );
        }
    }
    out
}
