//! Program spectra: elements, tests, the per-test coverage matrix and the
//! four basic statistics derived from them.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Display name given to the per-file elements that enclose top-level code.
pub const MODULE_NAME: &str = "<module>";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ElementKind {
    Class,
    Method,
    Statement,
}

/// Analysis level. The levels coincide with the element kinds.
pub type Granularity = ElementKind;

impl ElementKind {
    pub const ALL: [ElementKind; 3] = [ElementKind::Class, ElementKind::Method, ElementKind::Statement];

    pub fn as_str(self) -> &'static str {
        match self {
            ElementKind::Class => "class",
            ElementKind::Method => "method",
            ElementKind::Statement => "statement",
        }
    }

    /// Kind an element's parent must have, if it has one.
    pub fn parent_kind(self) -> Option<ElementKind> {
        match self {
            ElementKind::Class => None,
            ElementKind::Method => Some(ElementKind::Class),
            ElementKind::Statement => Some(ElementKind::Method),
        }
    }

    /// Nesting depth in the class → method → statement tree.
    pub fn depth(self) -> usize {
        match self {
            ElementKind::Class => 0,
            ElementKind::Method => 1,
            ElementKind::Statement => 2,
        }
    }
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ElementKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "class" => Ok(ElementKind::Class),
            "method" | "function" => Ok(ElementKind::Method),
            "statement" | "line" => Ok(ElementKind::Statement),
            other => Err(format!("unknown granularity `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProgramElement {
    pub id: String,
    pub kind: ElementKind,
    /// Relative path with `/` separators.
    pub file: String,
    pub line: u32,
    pub end_line: u32,
    pub parent_id: Option<String>,
    pub display_name: String,
    /// Inserted to enclose top-level code; never written back out.
    pub synthetic: bool,
}

impl ProgramElement {
    pub fn new(id: impl Into<String>, kind: ElementKind, file: impl Into<String>, line: u32) -> Self {
        let id = id.into();
        ProgramElement {
            display_name: id.clone(),
            id,
            kind,
            file: file.into(),
            line,
            end_line: line,
            parent_id: None,
            synthetic: false,
        }
    }

    pub fn with_parent(mut self, parent: impl Into<String>) -> Self {
        self.parent_id = Some(parent.into());
        self
    }

    pub fn with_end_line(mut self, end_line: u32) -> Self {
        self.end_line = end_line;
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.display_name = name.into();
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Passed,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestCase {
    pub id: String,
    pub outcome: Outcome,
}

impl TestCase {
    pub fn new(id: impl Into<String>, outcome: Outcome) -> Self {
        TestCase { id: id.into(), outcome }
    }
}

/// Binary hit matrix: one row per test, one column per element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageMatrix {
    tests: Vec<String>,
    elements: Vec<String>,
    bits: Vec<bool>,
}

impl CoverageMatrix {
    /// `bits` is row-major, `tests.len()` rows by `elements.len()` columns.
    pub fn new(tests: Vec<String>, elements: Vec<String>, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != tests.len() * elements.len() {
            return Err(Error::DimensionMismatch {
                rows: tests.len(),
                outcomes: bits.len() / elements.len().max(1),
            });
        }
        Ok(CoverageMatrix { tests, elements, bits })
    }

    /// Builds a matrix from per-row lists of covered column indices.
    pub fn from_hits(tests: Vec<String>, elements: Vec<String>, hits: &[Vec<usize>]) -> Result<Self> {
        if hits.len() != tests.len() {
            return Err(Error::DimensionMismatch {
                rows: tests.len(),
                outcomes: hits.len(),
            });
        }
        let cols = elements.len();
        let mut bits = vec![false; tests.len() * cols];
        for (row, covered) in hits.iter().enumerate() {
            for &col in covered {
                if col >= cols {
                    return Err(Error::reference(
                        tests[row].clone(),
                        format!("column {col} out of range ({cols} columns)"),
                    ));
                }
                bits[row * cols + col] = true;
            }
        }
        Ok(CoverageMatrix { tests, elements, bits })
    }

    pub fn tests(&self) -> &[String] {
        &self.tests
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn rows(&self) -> usize {
        self.tests.len()
    }

    pub fn cols(&self) -> usize {
        self.elements.len()
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.cols() + col]
    }

    pub fn row(&self, row: usize) -> &[bool] {
        let cols = self.cols();
        &self.bits[row * cols..(row + 1) * cols]
    }

    /// Covered column indices of one row, ascending.
    pub fn hits(&self, row: usize) -> Vec<usize> {
        self.row(row)
            .iter()
            .enumerate()
            .filter_map(|(c, &b)| b.then_some(c))
            .collect()
    }
}

/// The four basic statistics of one element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct SpectrumCounts {
    pub ef: usize,
    pub ep: usize,
    pub nf: usize,
    pub np: usize,
}

impl SpectrumCounts {
    pub const fn new(ef: usize, ep: usize, nf: usize, np: usize) -> Self {
        SpectrumCounts { ef, ep, nf, np }
    }

    pub fn total_failed(&self) -> usize {
        self.ef + self.nf
    }

    pub fn total_passed(&self) -> usize {
        self.ep + self.np
    }
}

/// Validated program spectra.
///
/// Top-level statements are enclosed in a synthetic `<module>` method and
/// class-less methods in a synthetic `<module>` class, one per file, so every
/// statement has a method and a class ancestor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectraSet {
    elements: Vec<ProgramElement>,
    tests: Vec<TestCase>,
    matrix: CoverageMatrix,
    index: HashMap<String, usize>,
}

impl SpectraSet {
    /// `matrix` rows must follow `tests` and its columns must list the
    /// statement elements in declaration order.
    pub fn new(elements: Vec<ProgramElement>, tests: Vec<TestCase>, matrix: CoverageMatrix) -> Result<Self> {
        if tests.is_empty() {
            return Err(Error::EmptyInput("no passed or failed tests".into()));
        }
        if !elements.iter().any(|e| e.kind == ElementKind::Statement) {
            return Err(Error::EmptyInput("no statement elements".into()));
        }

        let mut seen = HashSet::new();
        for t in &tests {
            if !seen.insert(t.id.as_str()) {
                return Err(Error::schema(format!("tests[{}]", t.id), "duplicate test id"));
            }
        }

        let mut index = HashMap::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.id.clone(), i).is_some() {
                return Err(Error::schema(format!("elements[{}]", e.id), "duplicate element id"));
            }
            if e.line == 0 {
                return Err(Error::schema(format!("elements[{}]", e.id), "line numbers are 1-based"));
            }
            if e.end_line < e.line {
                return Err(Error::schema(
                    format!("elements[{}]", e.id),
                    format!("end_line {} precedes line {}", e.end_line, e.line),
                ));
            }
        }
        for e in &elements {
            let Some(parent) = &e.parent_id else { continue };
            let Some(&p) = index.get(parent) else {
                return Err(Error::reference(e.id.clone(), format!("unknown parent_id `{parent}`")));
            };
            let expected = e.kind.parent_kind();
            if expected != Some(elements[p].kind) {
                return Err(Error::reference(
                    e.id.clone(),
                    format!(
                        "a {} cannot be nested in {} `{parent}`",
                        e.kind, elements[p].kind
                    ),
                ));
            }
        }

        if matrix.tests() != tests.iter().map(|t| t.id.clone()).collect::<Vec<_>>().as_slice() {
            return Err(Error::DimensionMismatch {
                rows: matrix.rows(),
                outcomes: tests.len(),
            });
        }
        let statements: Vec<String> = elements
            .iter()
            .filter(|e| e.kind == ElementKind::Statement)
            .map(|e| e.id.clone())
            .collect();
        if matrix.elements() != statements.as_slice() {
            return Err(Error::reference(
                "coverage",
                "matrix columns do not match the statement elements",
            ));
        }

        let mut set = SpectraSet {
            elements,
            tests,
            matrix,
            index,
        };
        set.close_hierarchy()?;
        Ok(set)
    }

    fn close_hierarchy(&mut self) -> Result<()> {
        // file -> (min line, max line) of orphans
        let mut orphan_statements: BTreeMap<String, (u32, u32)> = BTreeMap::new();
        for e in &self.elements {
            if e.kind == ElementKind::Statement && e.parent_id.is_none() {
                let span = orphan_statements.entry(e.file.clone()).or_insert((e.line, e.end_line));
                span.0 = span.0.min(e.line);
                span.1 = span.1.max(e.end_line);
            }
        }
        let mut synthetic = Vec::new();
        for (file, (line, end_line)) in &orphan_statements {
            let id = module_method_id(file);
            synthetic.push(
                ProgramElement::new(id, ElementKind::Method, file.clone(), *line)
                    .with_end_line(*end_line)
                    .with_name(MODULE_NAME),
            );
        }
        for e in &mut self.elements {
            if e.kind == ElementKind::Statement && e.parent_id.is_none() {
                e.parent_id = Some(module_method_id(&e.file));
            }
        }

        let mut orphan_methods: BTreeMap<String, (u32, u32)> = BTreeMap::new();
        for e in self.elements.iter().chain(synthetic.iter()) {
            if e.kind == ElementKind::Method && e.parent_id.is_none() {
                let span = orphan_methods.entry(e.file.clone()).or_insert((e.line, e.end_line));
                span.0 = span.0.min(e.line);
                span.1 = span.1.max(e.end_line);
            }
        }
        for (file, (line, end_line)) in &orphan_methods {
            synthetic.push(
                ProgramElement::new(module_class_id(file), ElementKind::Class, file.clone(), *line)
                    .with_end_line(*end_line)
                    .with_name(MODULE_NAME),
            );
        }
        for e in self.elements.iter_mut().chain(synthetic.iter_mut()) {
            if e.kind == ElementKind::Method && e.parent_id.is_none() {
                e.parent_id = Some(module_class_id(&e.file));
            }
        }

        for mut e in synthetic {
            if self.index.contains_key(&e.id) {
                return Err(Error::schema(
                    format!("elements[{}]", e.id),
                    "id is reserved for the synthetic module element",
                ));
            }
            e.synthetic = true;
            self.index.insert(e.id.clone(), self.elements.len());
            self.elements.push(e);
        }
        Ok(())
    }

    pub fn elements(&self) -> &[ProgramElement] {
        &self.elements
    }

    /// Elements as they were supplied, without the synthetic enclosures.
    pub fn declared_elements(&self) -> impl Iterator<Item = &ProgramElement> {
        self.elements.iter().filter(|e| !e.synthetic)
    }

    pub fn tests(&self) -> &[TestCase] {
        &self.tests
    }

    pub fn matrix(&self) -> &CoverageMatrix {
        &self.matrix
    }

    pub fn element(&self, id: &str) -> Option<&ProgramElement> {
        self.index.get(id).map(|&i| &self.elements[i])
    }

    pub fn outcomes(&self) -> Vec<Outcome> {
        self.tests.iter().map(|t| t.outcome).collect()
    }

    pub fn total_failed(&self) -> usize {
        self.tests.iter().filter(|t| t.outcome == Outcome::Failed).count()
    }

    pub fn total_passed(&self) -> usize {
        self.tests.len() - self.total_failed()
    }

    pub fn elements_of(&self, kind: ElementKind) -> impl Iterator<Item = &ProgramElement> {
        self.elements.iter().filter(move |e| e.kind == kind)
    }

    /// Whether any non-synthetic element of this kind exists.
    pub fn has_declared(&self, kind: ElementKind) -> bool {
        self.declared_elements().any(|e| e.kind == kind)
    }

    pub fn parent(&self, id: &str) -> Option<&ProgramElement> {
        self.element(id)?.parent_id.as_deref().and_then(|p| self.element(p))
    }

    /// Nearest ancestor-or-self of the given kind.
    pub fn ancestor(&self, id: &str, kind: ElementKind) -> Option<&ProgramElement> {
        let mut cur = self.element(id)?;
        loop {
            if cur.kind == kind {
                return Some(cur);
            }
            cur = self.element(cur.parent_id.as_deref()?)?;
        }
    }

    /// Direct children in element order.
    pub fn children<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a ProgramElement> + 'a {
        self.elements
            .iter()
            .filter(move |e| e.parent_id.as_deref() == Some(id))
    }

    /// Coverage at any level, synthetic enclosures included.
    pub(crate) fn rollup_total(&self, granularity: Granularity) -> CoverageMatrix {
        if granularity == ElementKind::Statement {
            return self.matrix.clone();
        }
        let groups: Vec<&ProgramElement> = self.elements_of(granularity).collect();
        let group_index: HashMap<&str, usize> =
            groups.iter().enumerate().map(|(i, e)| (e.id.as_str(), i)).collect();
        let column_group: Vec<Option<usize>> = self
            .matrix
            .elements()
            .iter()
            .map(|s| {
                self.ancestor(s, granularity)
                    .and_then(|a| group_index.get(a.id.as_str()).copied())
            })
            .collect();

        let cols = groups.len();
        let mut bits = vec![false; self.matrix.rows() * cols];
        for row in 0..self.matrix.rows() {
            for (col, &hit) in self.matrix.row(row).iter().enumerate() {
                if let (true, Some(g)) = (hit, column_group[col]) {
                    bits[row * cols + g] = true;
                }
            }
        }
        CoverageMatrix {
            tests: self.matrix.tests.clone(),
            elements: groups.iter().map(|e| e.id.clone()).collect(),
            bits,
        }
    }

    /// Basic statistics of every element at a level, synthetic enclosures included.
    pub fn counts_at(&self, granularity: Granularity) -> IndexMap<String, SpectrumCounts> {
        compute_counts(&self.rollup_total(granularity), &self.outcomes())
            .expect("matrix rows follow the test list")
    }
}

fn module_method_id(file: &str) -> String {
    format!("{file}::{MODULE_NAME}::{MODULE_NAME}")
}

fn module_class_id(file: &str) -> String {
    format!("{file}::{MODULE_NAME}")
}

/// Coverage matrix at the requested level: a coarse element is hit by a test
/// iff any of its statements is.
pub fn rollup_coverage(spectra: &SpectraSet, granularity: Granularity) -> Result<CoverageMatrix> {
    if !spectra.has_declared(granularity) {
        return Err(Error::UnknownGranularity(granularity));
    }
    Ok(spectra.rollup_total(granularity))
}

/// The four basic statistics for every column of `matrix`, in column order.
pub fn compute_counts(
    matrix: &CoverageMatrix,
    outcomes: &[Outcome],
) -> Result<IndexMap<String, SpectrumCounts>> {
    if outcomes.len() != matrix.rows() {
        return Err(Error::DimensionMismatch {
            rows: matrix.rows(),
            outcomes: outcomes.len(),
        });
    }
    let total_failed = outcomes.iter().filter(|&&o| o == Outcome::Failed).count();
    let total_passed = outcomes.len() - total_failed;

    let mut ef = vec![0usize; matrix.cols()];
    let mut ep = vec![0usize; matrix.cols()];
    for (row, outcome) in outcomes.iter().enumerate() {
        let tally = match outcome {
            Outcome::Failed => &mut ef,
            Outcome::Passed => &mut ep,
        };
        for (col, &hit) in matrix.row(row).iter().enumerate() {
            tally[col] += usize::from(hit);
        }
    }
    Ok(matrix
        .elements()
        .iter()
        .enumerate()
        .map(|(col, id)| {
            (
                id.clone(),
                SpectrumCounts::new(ef[col], ep[col], total_failed - ef[col], total_passed - ep[col]),
            )
        })
        .collect())
}
