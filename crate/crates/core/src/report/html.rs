use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write;

use tracing::warn;

use super::{format_score, RunConfig, TintScale, TINT_LEVELS};
use crate::model::{ElementKind, Granularity, SpectraSet};
use crate::num::Scalar;
use crate::ranking::{visible_nodes, HierNode, RankedList};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HtmlReport {
    pub html: String,
    /// Source files that could not be embedded.
    pub warnings: Vec<String>,
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            c => out.push(c),
        }
    }
    out
}

fn style() -> String {
    let mut css = String::from(
        "body{font-family:sans-serif;margin:1.5em;color:#222}\
table.ranking{border-collapse:collapse;margin:.5em 0 1em}\
table.ranking th,table.ranking td{border:1px solid #ccc;padding:.2em .6em;text-align:left}\
td.num{text-align:right;font-family:monospace}\
details{margin-left:1.2em}summary{cursor:pointer}\
.tree>details{margin-left:0}\
pre.source{border:1px solid #ccc;padding:.4em 0;overflow-x:auto}\
pre.source span.line{display:block;padding:0 .6em}\
pre.source span.ln{display:inline-block;width:3.5em;color:#888;user-select:none}\
a{color:inherit}\
",
    );
    // white -> dark red
    for level in 0..TINT_LEVELS {
        if level == 0 {
            css.push_str(".level-0{background:none}");
            continue;
        }
        let t = f64::from(level) / f64::from(TINT_LEVELS - 1);
        let r = (255.0 - t * (255.0 - 139.0)).round() as u8;
        let gb = (255.0 - t * 255.0).round() as u8;
        let fg = if t > 0.55 { "#fff" } else { "#222" };
        let _ = write!(css, ".level-{level}{{background:#{r:02x}{gb:02x}{gb:02x};color:{fg}}}");
    }
    css
}

struct SourcePane {
    index: usize,
    lines: Vec<String>,
}

/// Self-contained HTML report: per-metric ranked tables, a collapsible
/// class → method → statement tree and line-numbered source listings
/// shaded by statement suspiciousness.
pub fn render_html<T: Scalar>(lists: &[RankedList<T>], spectra: &SpectraSet, config: &RunConfig) -> HtmlReport {
    let mut warnings = Vec::new();

    let files: BTreeSet<&str> = spectra
        .elements_of(ElementKind::Statement)
        .map(|e| e.file.as_str())
        .collect();
    let mut panes: BTreeMap<&str, SourcePane> = BTreeMap::new();
    if let Some(root) = &config.source_root {
        for (index, file) in files.iter().enumerate() {
            let path = root.join(file);
            match std::fs::read_to_string(&path) {
                Ok(text) => {
                    panes.insert(
                        file,
                        SourcePane {
                            index,
                            lines: text.lines().map(str::to_string).collect(),
                        },
                    );
                }
                Err(e) => {
                    let msg = format!("source not found: {} ({e})", path.display());
                    warn!("{msg}");
                    warnings.push(msg);
                }
            }
        }
    }

    let statement_counts = spectra.counts_at(ElementKind::Statement);

    let mut body = String::new();
    let _ = writeln!(
        body,
        "<h1>Fault localization report</h1>\n<p class=\"summary\">{} tests ({} failed, {} passed), {} statements.</p>",
        spectra.tests().len(),
        spectra.total_failed(),
        spectra.total_passed(),
        statement_counts.len()
    );
    if !warnings.is_empty() {
        body.push_str("<ul class=\"warnings\">\n");
        for w in &warnings {
            let _ = writeln!(body, "<li>{}</li>", escape(w));
        }
        body.push_str("</ul>\n");
    }

    for (k, list) in lists.iter().enumerate() {
        // source tint uses every statement's score, not just the ranked ones
        let line_scores: HashMap<(&str, u32), T> = spectra
            .elements_of(ElementKind::Statement)
            .map(|e| ((e.file.as_str(), e.line), list.metric.evaluate::<T>(statement_counts[&e.id]).value))
            .collect();
        let line_scale = TintScale::new(line_scores.values().copied());
        let row_scale = TintScale::new(list.entries.iter().map(|e| e.score.value));

        let target = |id: &str| -> String {
            let e = spectra.element(id).expect("ranked ids exist");
            match panes.get(e.file.as_str()) {
                Some(p) => format!("#src-{k}-f{}-L{}", p.index, e.line),
                None => format!("#tree-{k}-{}", escape(&e.id)),
            }
        };

        let _ = writeln!(
            body,
            "<section class=\"metric\" id=\"metric-{k}\">\n<h2>{} &middot; {} level &middot; ties: {}</h2>",
            list.metric, list.granularity, list.tie
        );

        body.push_str(
            "<table class=\"ranking\">\n<thead><tr><th>Name</th><th>Position</th><th>Rank</th><th>Score</th></tr></thead>\n<tbody>\n",
        );
        for (i, s) in list.entries.iter().enumerate() {
            let e = spectra.element(&s.element_id).expect("ranked ids exist");
            let _ = writeln!(
                body,
                "<tr id=\"rank-{k}-{i}\" class=\"ranked level-{}\" data-score=\"{}\"><td><a class=\"elem-anchor\" href=\"{}\">{}</a></td><td>{}:{}</td><td class=\"num\">{}</td><td class=\"num\">{}</td></tr>",
                row_scale.level(s.score.value),
                format_score(s.score.value),
                target(&e.id),
                escape(&e.display_name),
                escape(&e.file),
                e.line,
                s.rank,
                format_score(s.score.value)
            );
        }
        body.push_str("</tbody>\n</table>\n");

        if let Some(tree) = &list.hierarchy {
            body.push_str("<div class=\"tree\">\n");
            for n in visible_nodes(tree, spectra, list.granularity) {
                tree_node(&mut body, n, spectra, k, &target, &line_scale, list.granularity);
            }
            body.push_str("</div>\n");
        }

        for (file, pane) in &panes {
            let _ = writeln!(
                body,
                "<h3 id=\"src-{k}-f{}\">{}</h3>\n<pre class=\"source\">",
                pane.index,
                escape(file)
            );
            for (i, text) in pane.lines.iter().enumerate() {
                let line = i as u32 + 1;
                let level = line_scores.get(&(*file, line)).map_or(0, |s| line_scale.level(*s));
                let _ = writeln!(
                    body,
                    "<span class=\"line level-{level}\" id=\"src-{k}-f{}-L{line}\"><span class=\"ln\">{line}</span>{}</span>",
                    pane.index,
                    escape(text)
                );
            }
            body.push_str("</pre>\n");
        }
        body.push_str("</section>\n");
    }

    let html = format!(
        "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n<title>Fault localization report</title>\n<style>{}</style>\n</head>\n<body>\n{body}</body>\n</html>\n",
        style()
    );
    HtmlReport { html, warnings }
}

#[allow(clippy::too_many_arguments)]
fn tree_node<T: Scalar>(
    out: &mut String,
    n: &HierNode<T>,
    spectra: &SpectraSet,
    k: usize,
    target: &dyn Fn(&str) -> String,
    scale: &TintScale,
    granularity: Granularity,
) {
    let e = spectra.element(&n.element_id).expect("ranked ids exist");
    let label = format!(
        "<a href=\"{}\">{}</a> <small>{}:{} &middot; rank {} &middot; score {}</small>",
        target(&e.id),
        escape(&e.display_name),
        escape(&e.file),
        e.line,
        n.rank,
        format_score(n.score.value)
    );
    let id = format!("tree-{k}-{}", escape(&e.id));
    let children = visible_nodes(&n.children, spectra, granularity);
    if children.is_empty() {
        let _ = writeln!(
            out,
            "<div class=\"leaf {} level-{}\" id=\"{id}\">{label}</div>",
            e.kind,
            scale.level(n.score.value)
        );
    } else {
        let _ = writeln!(out, "<details open class=\"{}\" id=\"{id}\"><summary>{label}</summary>", e.kind);
        for c in children {
            tree_node(out, c, spectra, k, target, scale, granularity);
        }
        out.push_str("</details>\n");
    }
}
