use std::fmt::Write;

use indexmap::IndexMap;
use serde::Serialize;
use serde_json::value::RawValue;

use super::format_score;
use crate::eval::{EvalVerdict, GroundTruth};
use crate::model::SpectraSet;
use crate::num::Scalar;

#[derive(Serialize)]
struct Document<'a> {
    schema_version: &'static str,
    truth: Vec<String>,
    verdicts: Vec<Verdict<'a>>,
}

#[derive(Serialize)]
struct Verdict<'a> {
    metric: String,
    faulty_element: &'a str,
    file: &'a str,
    line: u32,
    score: Box<RawValue>,
    min_rank: Box<RawValue>,
    avg_rank: Box<RawValue>,
    max_rank: Box<RawValue>,
    top_n_hit: IndexMap<String, bool>,
    list_length: usize,
}

fn raw(s: String) -> Box<RawValue> {
    RawValue::from_string(s).expect("valid JSON literal")
}

pub fn render_eval_json<T: Scalar>(verdicts: &[EvalVerdict<T>], truth: &GroundTruth, spectra: &SpectraSet) -> String {
    let doc = Document {
        schema_version: "1.0",
        truth: truth.faults.iter().map(ToString::to_string).collect(),
        verdicts: verdicts
            .iter()
            .map(|v| {
                let e = spectra.element(&v.faulty_element).expect("resolved truth exists");
                let score = format_score(v.score);
                Verdict {
                    metric: v.metric.to_string(),
                    faulty_element: &e.id,
                    file: &e.file,
                    line: e.line,
                    score: raw(if score.ends_with("inf") { format!("\"{score}\"") } else { score }),
                    min_rank: raw(v.min_rank.to_string()),
                    avg_rank: raw(v.avg_rank.to_string()),
                    max_rank: raw(v.max_rank.to_string()),
                    top_n_hit: v.top_n_hit.iter().map(|(n, h)| (n.to_string(), *h)).collect(),
                    list_length: v.list_length,
                }
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("verdicts serialize");
    out.push('\n');
    out
}

pub fn render_eval_table<T: Scalar>(verdicts: &[EvalVerdict<T>], spectra: &SpectraSet) -> String {
    let mut rows: Vec<[String; 6]> = vec![[
        "Metric".into(),
        "Faulty element".into(),
        "Score".into(),
        "Rank min/avg/max".into(),
        "Top-N hits".into(),
        "Of".into(),
    ]];
    for v in verdicts {
        let e = spectra.element(&v.faulty_element).expect("resolved truth exists");
        let hits = v
            .top_n_hit
            .iter()
            .map(|(n, h)| format!("@{n}:{}", if *h { "yes" } else { "no" }))
            .collect::<Vec<_>>()
            .join(" ");
        rows.push([
            v.metric.to_string(),
            format!("{}:{}", e.file, e.line),
            format_score(v.score),
            format!("{}/{}/{}", v.min_rank, v.avg_rank, v.max_rank),
            hits,
            v.list_length.to_string(),
        ]);
    }
    let widths: Vec<usize> = (0..6)
        .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for (i, r) in rows.iter().enumerate() {
        let cells: Vec<String> = r.iter().zip(&widths).map(|(cell, w)| format!("{cell:<w$}")).collect();
        let _ = writeln!(out, "{}", cells.join(" | ").trim_end());
        if i == 0 {
            let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
            let _ = writeln!(out, "{}", rule.join("-+-"));
        }
    }
    out
}
