mod common;

use std::collections::{BTreeMap, HashMap};

use charmfl_core::metrics::Score;
use charmfl_core::ranking::{flatten_statements, rank_level, LevelRanks};
use charmfl_core::{
    analyze, assign_ranks, build_hierarchical, CoverageMatrix, ElementKind, Error, MetricId, Outcome,
    ProgramElement, SpectraSet, TestCase, TieStrategy,
};
use common::{cart, random_spectra};
use indexmap::IndexMap;
use proptest::prelude::*;

fn scored(values: &[f64]) -> Vec<(String, Score<f64>)> {
    values
        .iter()
        .enumerate()
        .map(|(i, &v)| (format!("e{i}"), Score { value: v, metric: MetricId::OCHIAI }))
        .collect()
}

fn rank_map(values: &[f64], tie: TieStrategy) -> HashMap<String, charmfl_core::Rank> {
    assign_ranks(&scored(values), tie)
        .into_iter()
        .map(|e| (e.element_id, e.rank))
        .collect()
}

// scores drawn from a small grid so ties are common
fn score_list() -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec((0u8..8).prop_map(|k| f64::from(k) / 8.0), 1..40)
}

proptest! {
    #[test]
    fn strategies_are_ordered(values in score_list()) {
        let min = rank_map(&values, TieStrategy::Min);
        let avg = rank_map(&values, TieStrategy::Average);
        let max = rank_map(&values, TieStrategy::Max);
        for id in min.keys() {
            prop_assert!(min[id] <= avg[id] && avg[id] <= max[id]);
        }
        let n = values.len() as f64;
        let sum: f64 = avg.values().map(|r| r.as_f64()).sum();
        prop_assert_eq!(sum, n * (n + 1.0) / 2.0);
    }

    #[test]
    fn ranks_survive_monotone_transforms(values in score_list()) {
        let transformed: Vec<f64> = values.iter().map(|v| (3.0 * v + 1.0).exp()).collect();
        for tie in TieStrategy::ALL {
            prop_assert_eq!(rank_map(&values, tie), rank_map(&transformed, tie));
        }
    }

    #[test]
    fn equal_scores_rank_alike_in_any_input_order(values in score_list(), seed in any::<u64>()) {
        let input = scored(&values);
        let mut shuffled = input.clone();
        // deterministic permutation
        let n = shuffled.len();
        for i in (1..n).rev() {
            let j = (seed.wrapping_mul(6364136223846793005).wrapping_add(i as u64) % (i as u64 + 1)) as usize;
            shuffled.swap(i, j);
        }
        for tie in TieStrategy::ALL {
            let a: HashMap<_, _> = assign_ranks(&input, tie).into_iter().map(|e| (e.element_id, e.rank)).collect();
            let b: HashMap<_, _> = assign_ranks(&shuffled, tie).into_iter().map(|e| (e.element_id, e.rank)).collect();
            prop_assert_eq!(a, b);
        }
        let sorted = assign_ranks(&input, TieStrategy::Min);
        for w in sorted.windows(2) {
            prop_assert!(w[0].score.value >= w[1].score.value);
        }
    }

    #[test]
    fn hierarchy_visits_every_statement_once(r in random_spectra(6, 24)) {
        let s = r.build();
        for metric in MetricId::ALL {
            let lists = analyze::<f64>(&s, &[metric], ElementKind::Statement, TieStrategy::Min).unwrap();
            let tree = lists[0].hierarchy.as_ref().unwrap();
            let mut flat = flatten_statements(tree);
            prop_assert_eq!(flat.len(), s.matrix().cols());
            flat.sort_unstable();
            flat.dedup();
            prop_assert_eq!(flat.len(), s.matrix().cols());
            // every child list is sorted by score
            let mut stack: Vec<&charmfl_core::HierNode> = tree.iter().collect();
            while let Some(n) = stack.pop() {
                for w in n.children.windows(2) {
                    prop_assert!(w[0].score.value >= w[1].score.value);
                }
                stack.extend(n.children.iter());
            }
        }
    }
}

#[test]
fn cart_method_ranking_puts_add_to_cart_in_top_group() {
    let s = cart();
    let lists = analyze::<f64>(&s, &[MetricId::TARANTULA], ElementKind::Method, TieStrategy::Min).unwrap();
    let entries = &lists[0].entries;
    let add = entries.iter().find(|e| e.element_id == "example.py::addToCart").unwrap();
    assert_eq!(add.rank, 1);
    let order: Vec<&str> = entries.iter().map(|e| e.element_id.as_str()).collect();
    assert_eq!(
        order,
        [
            "example.py::addToCart",
            "example.py::removeFromCart",
            "example.py::getProductCount",
            "example.py::printProductsInCart"
        ]
    );
}

/// Two methods, the first scoring high, the second low; the low method's
/// statements carry individually higher ranks than some of the high method's.
fn two_method_spectra() -> SpectraSet {
    let elements = vec![
        ProgramElement::new("hi", ElementKind::Method, "a.py", 1).with_end_line(3),
        ProgramElement::new("hi.1", ElementKind::Statement, "a.py", 2).with_parent("hi"),
        ProgramElement::new("hi.2", ElementKind::Statement, "a.py", 3).with_parent("hi"),
        ProgramElement::new("lo", ElementKind::Method, "a.py", 30).with_end_line(38),
        ProgramElement::new("lo.1", ElementKind::Statement, "a.py", 37).with_parent("lo"),
    ];
    let tests = vec![
        TestCase::new("f1", Outcome::Failed),
        TestCase::new("p1", Outcome::Passed),
        TestCase::new("p2", Outcome::Passed),
    ];
    let cols = vec!["hi.1".to_string(), "hi.2".to_string(), "lo.1".to_string()];
    let matrix = CoverageMatrix::from_hits(
        tests.iter().map(|t| t.id.clone()).collect(),
        cols,
        &[vec![0], vec![1, 2], vec![1, 2]],
    )
    .unwrap();
    SpectraSet::new(elements, tests, matrix).unwrap()
}

#[test]
fn statements_of_higher_ranked_methods_come_first() {
    let s = two_method_spectra();
    let mut levels: LevelRanks<f64> = BTreeMap::new();
    let fixed = |pairs: &[(&str, f64)]| -> IndexMap<String, Score<f64>> {
        pairs
            .iter()
            .map(|(id, v)| (id.to_string(), Score { value: *v, metric: MetricId::TARANTULA }))
            .collect()
    };
    let class_id = s.elements_of(ElementKind::Class).next().unwrap().id.clone();
    levels.insert(ElementKind::Class, rank_level(&s, &fixed(&[(&class_id, 0.9)]), TieStrategy::Min));
    levels.insert(ElementKind::Method, rank_level(&s, &fixed(&[("hi", 0.9), ("lo", 0.1)]), TieStrategy::Min));
    levels.insert(
        ElementKind::Statement,
        rank_level(&s, &fixed(&[("hi.1", 0.2), ("hi.2", 0.05), ("lo.1", 0.8)]), TieStrategy::Min),
    );
    let tree = build_hierarchical(&levels, &s).unwrap();
    assert_eq!(flatten_statements(&tree), ["hi.1", "hi.2", "lo.1"]);

    levels.remove(&ElementKind::Method);
    assert!(matches!(build_hierarchical(&levels, &s), Err(Error::MissingGranularity(ElementKind::Method))));
}

#[test]
fn single_path_hierarchy() {
    let elements = vec![
        ProgramElement::new("C", ElementKind::Class, "a.py", 1).with_end_line(9),
        ProgramElement::new("m", ElementKind::Method, "a.py", 2).with_end_line(9).with_parent("C"),
        ProgramElement::new("s3", ElementKind::Statement, "a.py", 3).with_parent("m"),
        ProgramElement::new("s4", ElementKind::Statement, "a.py", 4).with_parent("m"),
    ];
    let tests = vec![TestCase::new("f", Outcome::Failed), TestCase::new("p", Outcome::Passed)];
    let matrix = CoverageMatrix::from_hits(
        vec!["f".into(), "p".into()],
        vec!["s3".into(), "s4".into()],
        &[vec![1], vec![0, 1]],
    )
    .unwrap();
    let s = SpectraSet::new(elements, tests, matrix).unwrap();
    let lists = analyze::<f64>(&s, &[MetricId::OCHIAI], ElementKind::Statement, TieStrategy::Min).unwrap();
    let tree = lists[0].hierarchy.as_ref().unwrap();
    assert_eq!(tree.len(), 1);
    assert_eq!(tree[0].children.len(), 1);
    let flat_order: Vec<&str> = lists[0].entries.iter().map(|e| e.element_id.as_str()).collect();
    assert_eq!(flatten_statements(tree), flat_order);
    assert!(analyze::<f64>(&s, &[MetricId::OCHIAI], ElementKind::Class, TieStrategy::Min).is_ok());
}
