mod common;

use std::collections::HashSet;

use charmfl_core::report::{build_lists, render_html, render_json, render_table, Format, RunConfig};
use charmfl_core::{
    ElementKind, MetricId, TieStrategy,
};
use common::{cart, fixtures_dir};
use serde_json::Value;

fn config(metrics: &[MetricId], granularity: ElementKind) -> RunConfig {
    RunConfig {
        metrics: metrics.to_vec(),
        granularity,
        ..RunConfig::default()
    }
}

#[test]
fn json_for_cart_methods() {
    let s = cart();
    let cfg = config(&[MetricId::TARANTULA], ElementKind::Method);
    let lists = build_lists::<f64>(&s, &cfg).unwrap();
    let text = render_json(&lists, &s, &cfg);
    let v: Value = serde_json::from_str(&text).unwrap();
    let report = &v["reports"][0];
    assert_eq!(report["metric"], "tarantula");
    assert_eq!(report["granularity"], "method");
    assert_eq!(report["tie"], "min");
    let entries = report["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 4);
    let score = |name: &str| entries.iter().find(|e| e["name"] == name).unwrap()["score"].as_f64().unwrap();
    assert_eq!(score("addToCart"), 0.5);
    assert_eq!(score("removeFromCart"), 0.5);
    assert_eq!(score("printProductsInCart"), 0.0);
    assert_eq!(score("getProductCount"), 0.5);
    assert!(text.contains("\"score\": 0.500000"));
    // synthetic module class is spliced out; tree stops at methods
    let hierarchy = report["hierarchy"].as_array().unwrap();
    let names: Vec<&str> = hierarchy.iter().map(|n| n["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["addToCart", "removeFromCart", "getProductCount", "printProductsInCart"]);
    assert!(hierarchy.iter().all(|n| n["kind"] == "method" && n.get("children").is_none()));
    assert!(!text.contains("<module>"));
    assert_eq!(text, render_json(&build_lists::<f64>(&s, &cfg).unwrap(), &s, &cfg));
}

#[test]
fn json_marks_infinite_dstar_scores() {
    let s = cart();
    let cfg = config(&[MetricId::DSTAR], ElementKind::Statement);
    let v: Value = serde_json::from_str(&render_json(&build_lists::<f64>(&s, &cfg).unwrap(), &s, &cfg)).unwrap();
    let first = &v["reports"][0]["entries"][0];
    assert_eq!(first["id"], "example.py:11");
    assert_eq!(first["score"], "inf");
}

#[test]
fn json_ids_are_unique_per_section() {
    let s = cart();
    let cfg = config(&MetricId::ALL, ElementKind::Statement);
    let v: Value = serde_json::from_str(&render_json(&build_lists::<f64>(&s, &cfg).unwrap(), &s, &cfg)).unwrap();
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 4);
    for r in reports {
        let ids: Vec<&str> = r["entries"].as_array().unwrap().iter().map(|e| e["id"].as_str().unwrap()).collect();
        let unique: HashSet<&str> = ids.iter().copied().collect();
        assert_eq!(ids.len(), unique.len());
        assert_eq!(ids.len(), 8);
    }
}

#[test]
fn top_n_beyond_length_keeps_everything() {
    let s = cart();
    let mut cfg = config(&[MetricId::TARANTULA], ElementKind::Method);
    cfg.top_n = Some(10);
    assert_eq!(build_lists::<f64>(&s, &cfg).unwrap()[0].entries.len(), 4);
}

#[test]
fn table_lists_methods_without_synthetic_class() {
    let s = cart();
    let cfg = config(&[MetricId::TARANTULA], ElementKind::Method);
    let text = render_table(&build_lists::<f64>(&s, &cfg).unwrap(), &s, &cfg);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("tarantula (method, ties: min)"));
    assert!(lines[1].starts_with("Name"));
    assert!(lines[1].contains("| File:Line") && lines[1].contains("| Rank") && lines[1].contains("Score"));
    assert!(!text.contains("<module>"));
    let methods = &lines[3..];
    assert_eq!(methods.len(), 4);
    assert!(methods.iter().all(|l| !l.starts_with(' ')));
    assert!(methods[0].starts_with("addToCart "));
    assert!(methods[3].starts_with("printProductsInCart "));
    // fixed-width: every row has the separators at the same columns
    let bars: Vec<Vec<usize>> = lines[1..].iter().filter(|l| !l.contains("-+-")).map(|l| l.match_indices(" | ").map(|m| m.0).collect()).collect();
    assert!(bars.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn table_top_one_keeps_the_whole_first_group() {
    let s = cart();
    let mut cfg = config(&[MetricId::TARANTULA], ElementKind::Method);
    cfg.top_n = Some(1);
    let lists = build_lists::<f64>(&s, &cfg).unwrap();
    assert_eq!(lists[0].entries.len(), 3);
    let text = render_table(&lists, &s, &cfg);
    let rank_one_rows = text.lines().filter(|l| l.contains("|    1 |")).count();
    assert_eq!(rank_one_rows, 3);
    assert!(!text.contains("printProductsInCart"));
}

#[test]
fn table_color_is_opt_in() {
    let s = cart();
    let mut cfg = config(&[MetricId::OCHIAI], ElementKind::Statement);
    let lists = build_lists::<f64>(&s, &cfg).unwrap();
    assert!(!render_table(&lists, &s, &cfg).contains('\x1b'));
    cfg.color = true;
    assert!(render_table(&lists, &s, &cfg).contains("\x1b[1;31m"));
}

fn levels_by_line(html: &str) -> Vec<(u32, u8)> {
    html.lines()
        .filter(|l| l.starts_with("<span class=\"line level-") && l.contains("id=\"src-0-"))
        .map(|l| {
            let level: u8 = l["<span class=\"line level-".len()..].split('"').next().unwrap().parse().unwrap();
            let line: u32 = l.split("-L").nth(1).unwrap().split('"').next().unwrap().parse().unwrap();
            (line, level)
        })
        .collect()
}

#[test]
fn html_shades_the_faulty_line_darkest() {
    let s = cart();
    let mut cfg = config(&[MetricId::TARANTULA], ElementKind::Statement);
    cfg.format = Format::Html;
    cfg.source_root = Some(fixtures_dir().join("cart"));
    let report = render_html(&build_lists::<f64>(&s, &cfg).unwrap(), &s, &cfg);
    assert!(report.warnings.is_empty());
    let levels = levels_by_line(&report.html);
    assert_eq!(levels.len(), 25);
    let max = levels.iter().map(|l| l.1).max().unwrap();
    assert_eq!(max, 9);
    let darkest: Vec<u32> = levels.iter().filter(|l| l.1 == max).map(|l| l.0).collect();
    assert_eq!(darkest, [11]);
    // lines 10, 20, 21 score 0; blank lines have no statement
    for line in [1, 10, 12, 20, 21] {
        assert_eq!(levels[line as usize - 1].1, 0, "line {line}");
    }
    assert!(report.html.contains("href=\"#src-0-f0-L11\""));
}

#[test]
fn html_without_sources_has_no_panes() {
    let s = cart();
    let cfg = config(&MetricId::ALL, ElementKind::Method);
    let report = render_html(&build_lists::<f64>(&s, &cfg).unwrap(), &s, &cfg);
    assert!(!report.html.contains("<pre class=\"source\""));
    assert_eq!(report.html.matches("<table class=\"ranking\"").count(), 4);
    assert!(!report.html.contains("&lt;module&gt;"));
    assert_eq!(report.html.matches("<div class=\"leaf method ").count(), 16);
    let statements = render_html(&build_lists::<f64>(&s, &config(&[MetricId::OCHIAI], ElementKind::Statement)).unwrap(), &s, &cfg);
    assert_eq!(statements.html.matches("<details open class=\"method\"").count(), 4);
    let zero_rows = report.html.lines().filter(|l| l.contains("data-score=\"0.000000\"")).count();
    assert!(zero_rows > 0);
    assert!(report
        .html
        .lines()
        .filter(|l| l.contains("data-score=\"0.000000\""))
        .all(|l| l.contains("level-0")));
}

#[test]
fn html_missing_sources_degrade_with_a_warning() {
    let s = cart();
    let mut cfg = config(&[MetricId::OCHIAI], ElementKind::Statement);
    cfg.source_root = Some(fixtures_dir().join("no-such-dir"));
    let report = render_html(&build_lists::<f64>(&s, &cfg).unwrap(), &s, &cfg);
    assert_eq!(report.warnings.len(), 1);
    assert!(report.warnings[0].contains("example.py"));
    assert!(!report.html.contains("<pre class=\"source\""));
    assert!(report.html.contains("class=\"ranked"));
}

#[test]
fn average_ties_render_as_halves() {
    let s = cart();
    let mut cfg = config(&[MetricId::TARANTULA], ElementKind::Method);
    cfg.tie = TieStrategy::Average;
    let v: Value = serde_json::from_str(&render_json(&build_lists::<f64>(&s, &cfg).unwrap(), &s, &cfg)).unwrap();
    let ranks: Vec<f64> = v["reports"][0]["entries"].as_array().unwrap().iter().map(|e| e["rank"].as_f64().unwrap()).collect();
    assert_eq!(ranks, [2.0, 2.0, 2.0, 4.0]);
    cfg.tie = TieStrategy::Max;
    let v: Value = serde_json::from_str(&render_json(&build_lists::<f64>(&s, &cfg).unwrap(), &s, &cfg)).unwrap();
    assert_eq!(v["reports"][0]["entries"][0]["rank"], 3);
}
