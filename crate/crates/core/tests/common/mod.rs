#![allow(dead_code)]

use std::path::PathBuf;

use charmfl_core::{CoverageMatrix, ElementKind, Outcome, ProgramElement, SpectraSet, TestCase};
use proptest::prelude::*;

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn cart() -> SpectraSet {
    let bytes = std::fs::read(fixtures_dir().join("cart.json")).unwrap();
    charmfl_core::parse_spectra(&bytes).unwrap()
}

/// Random spectra shape: outcomes, statement -> method assignment, method ->
/// class assignment and the dense hit grid.
#[derive(Debug, Clone)]
pub struct RandomSpectra {
    pub outcomes: Vec<Outcome>,
    /// per statement: method index, or None for top-level code
    pub statement_method: Vec<Option<usize>>,
    /// per method: class index, or None
    pub method_class: Vec<Option<usize>>,
    pub classes: usize,
    /// rows = tests
    pub hits: Vec<Vec<bool>>,
}

impl RandomSpectra {
    pub fn build(&self) -> SpectraSet {
        let mut elements = Vec::new();
        for c in 0..self.classes {
            elements.push(ProgramElement::new(format!("C{c}"), ElementKind::Class, "m.py", 1 + c as u32 * 100).with_end_line(99 + c as u32 * 100));
        }
        for (m, class) in self.method_class.iter().enumerate() {
            let mut e = ProgramElement::new(format!("M{m}"), ElementKind::Method, "m.py", 2 + m as u32 * 10)
                .with_end_line(11 + m as u32 * 10);
            if let Some(c) = class {
                e = e.with_parent(format!("C{c}"));
            }
            elements.push(e);
        }
        let mut stmt_ids = Vec::new();
        for (s, method) in self.statement_method.iter().enumerate() {
            let mut e = ProgramElement::new(format!("S{s}"), ElementKind::Statement, "m.py", 1000 + s as u32);
            if let Some(m) = method {
                e = e.with_parent(format!("M{m}"));
            }
            stmt_ids.push(e.id.clone());
            elements.push(e);
        }
        let tests: Vec<TestCase> = self
            .outcomes
            .iter()
            .enumerate()
            .map(|(i, &o)| TestCase::new(format!("T{i}"), o))
            .collect();
        let bits: Vec<bool> = self.hits.iter().flatten().copied().collect();
        let matrix = CoverageMatrix::new(tests.iter().map(|t| t.id.clone()).collect(), stmt_ids, bits).unwrap();
        SpectraSet::new(elements, tests, matrix).unwrap()
    }
}

pub fn outcome() -> impl Strategy<Value = Outcome> {
    prop_oneof![Just(Outcome::Passed), Just(Outcome::Failed)]
}

/// Up to `max_tests` x `max_statements`, with up to 4 methods and 2 classes.
pub fn random_spectra(max_tests: usize, max_statements: usize) -> impl Strategy<Value = RandomSpectra> {
    (1..=max_tests, 1..=max_statements, 1usize..=4, 0usize..=2).prop_flat_map(|(t, s, m, c)| {
        let class_choice = if c == 0 { Just(None).boxed() } else { proptest::option::of(0..c).boxed() };
        (
            proptest::collection::vec(outcome(), t),
            proptest::collection::vec(proptest::option::weighted(0.85, 0..m), s),
            proptest::collection::vec(class_choice, m),
            Just(c),
            proptest::collection::vec(proptest::collection::vec(any::<bool>(), s), t),
        )
            .prop_map(|(outcomes, statement_method, method_class, classes, hits)| RandomSpectra {
                outcomes,
                statement_method,
                method_class,
                classes,
                hits,
            })
    })
}

/// Brute-force rollup oracle: group `g` is hit by test `t` iff some statement
/// whose ancestor chain reaches `g` is hit by `t`.
pub fn oracle_rollup(spectra: &SpectraSet, kind: ElementKind) -> Vec<(String, Vec<bool>)> {
    let stmts = spectra.matrix().elements().to_vec();
    spectra
        .elements()
        .iter()
        .filter(|e| e.kind == kind)
        .map(|g| {
            let column: Vec<bool> = (0..spectra.tests().len())
                .map(|t| {
                    stmts.iter().enumerate().any(|(c, s)| {
                        let mut cur = spectra.element(s).unwrap();
                        let mut reaches = cur.id == g.id;
                        while let Some(p) = &cur.parent_id {
                            cur = spectra.element(p).unwrap();
                            reaches |= cur.id == g.id;
                        }
                        reaches && spectra.matrix().get(t, c)
                    })
                })
                .collect();
            (g.id.clone(), column)
        })
        .collect()
}

/// Per-cell double loop.
pub fn oracle_counts(column: &[bool], outcomes: &[Outcome]) -> (usize, usize, usize, usize) {
    let (mut ef, mut ep, mut nf, mut np) = (0, 0, 0, 0);
    for (hit, outcome) in column.iter().zip(outcomes) {
        match (hit, outcome) {
            (true, Outcome::Failed) => ef += 1,
            (true, Outcome::Passed) => ep += 1,
            (false, Outcome::Failed) => nf += 1,
            (false, Outcome::Passed) => np += 1,
        }
    }
    (ef, ep, nf, np)
}
