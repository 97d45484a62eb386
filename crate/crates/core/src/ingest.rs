//! Spectra interchange format.
//!
//! A document lists tests with their outcomes, program elements with their
//! hierarchy links, and per test the indices (into `elements`) of the
//! statements it executed:
//!
//! ```json
//! {
//!   "schema_version": "1.0",
//!   "tests": [{ "id": "t1", "outcome": "failed" }],
//!   "elements": [{ "id": "a.py:3", "kind": "statement", "file": "a.py", "line": 3, "end_line": 3 }],
//!   "coverage": [{ "test": "t1", "elements": [0] }]
//! }
//! ```
//!
//! A coverage row may also be a bare index array (`[0]`), matched to the
//! test at the same position.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use tracing::warn;

use crate::error::{Error, Result};
use crate::model::{CoverageMatrix, ElementKind, Outcome, ProgramElement, SpectraSet, TestCase};

pub const SCHEMA_VERSION: &str = "1.0";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectraDocument {
    pub schema_version: String,
    pub tests: Vec<TestEntry>,
    pub elements: Vec<ElementEntry>,
    #[serde(default)]
    pub coverage: Vec<CoverageEntry>,
    #[serde(flatten, skip_serializing)]
    pub extra: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestEntry {
    pub id: String,
    /// `passed` or `failed`; anything else is dropped at ingest.
    pub outcome: String,
    #[serde(flatten, skip_serializing)]
    pub extra: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementEntry {
    pub id: String,
    pub kind: ElementKind,
    pub file: String,
    pub line: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end_line: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub display_name: Option<String>,
    #[serde(flatten, skip_serializing)]
    pub extra: BTreeMap<String, Value>,
}

/// One test's covered statements. A bare index array is also accepted,
/// in which case the row belongs to the test at the same position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "RawCoverage")]
pub struct CoverageEntry {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub test: Option<String>,
    pub elements: Vec<usize>,
    #[serde(skip_serializing)]
    pub extra: BTreeMap<String, Value>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawCoverage {
    Bare(Vec<usize>),
    Keyed {
        test: String,
        elements: Vec<usize>,
        #[serde(flatten)]
        extra: BTreeMap<String, Value>,
    },
}

impl From<RawCoverage> for CoverageEntry {
    fn from(raw: RawCoverage) -> Self {
        match raw {
            RawCoverage::Bare(elements) => CoverageEntry {
                test: None,
                elements,
                extra: BTreeMap::new(),
            },
            RawCoverage::Keyed { test, elements, extra } => CoverageEntry {
                test: Some(test),
                elements,
                extra,
            },
        }
    }
}

impl ElementEntry {
    fn same_element(&self, other: &ElementEntry) -> bool {
        self.id == other.id
            && self.kind == other.kind
            && normalize_path(&self.file) == normalize_path(&other.file)
            && self.line == other.line
            && self.end_line.unwrap_or(self.line) == other.end_line.unwrap_or(other.line)
            && self.parent_id == other.parent_id
            && self.display_name == other.display_name
    }
}

/// Normalizes a source path to `/` separators without leading `./`.
pub fn normalize_path(path: &str) -> String {
    let mut p = path.replace('\\', "/");
    while let Some(rest) = p.strip_prefix("./") {
        p = rest.to_string();
    }
    p
}

/// Deserializes a document without validating references.
pub fn parse_document(bytes: &[u8]) -> Result<SpectraDocument> {
    let de = &mut serde_json::Deserializer::from_slice(bytes);
    let doc: SpectraDocument = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::schema(path, e.into_inner().to_string())
    })?;
    if doc.schema_version != SCHEMA_VERSION {
        return Err(Error::schema(
            "schema_version",
            format!("unsupported version `{}` (expected {SCHEMA_VERSION})", doc.schema_version),
        ));
    }
    warn_unknown_fields(&doc);
    Ok(doc)
}

fn warn_unknown_fields(doc: &SpectraDocument) {
    let report = |path: String, extra: &BTreeMap<String, Value>| {
        for key in extra.keys() {
            warn!("ignoring unknown field `{key}` at {path}");
        }
    };
    report("<root>".into(), &doc.extra);
    for (i, t) in doc.tests.iter().enumerate() {
        report(format!("tests[{i}]"), &t.extra);
    }
    for (i, e) in doc.elements.iter().enumerate() {
        report(format!("elements[{i}]"), &e.extra);
    }
    for (i, c) in doc.coverage.iter().enumerate() {
        report(format!("coverage[{i}]"), &c.extra);
    }
}

/// Parses and validates a spectra document.
pub fn parse_spectra(bytes: &[u8]) -> Result<SpectraSet> {
    assemble(parse_document(bytes)?)
}

/// Validates a document and builds the in-memory spectra.
pub fn assemble(doc: SpectraDocument) -> Result<SpectraSet> {
    let mut tests = Vec::with_capacity(doc.tests.len());
    let mut dropped = HashSet::new();
    for (i, t) in doc.tests.iter().enumerate() {
        match t.outcome.as_str() {
            "passed" => tests.push(TestCase::new(t.id.clone(), Outcome::Passed)),
            "failed" => tests.push(TestCase::new(t.id.clone(), Outcome::Failed)),
            other => {
                warn!("excluding test `{}` (tests[{i}]) with outcome `{other}`", t.id);
                dropped.insert(t.id.as_str());
            }
        }
    }

    let elements: Vec<ProgramElement> = doc
        .elements
        .iter()
        .map(|e| ProgramElement {
            id: e.id.clone(),
            kind: e.kind,
            file: normalize_path(&e.file),
            line: e.line,
            end_line: e.end_line.unwrap_or(e.line),
            parent_id: e.parent_id.clone(),
            display_name: e.display_name.clone().unwrap_or_else(|| e.id.clone()),
            synthetic: false,
        })
        .collect();

    // element index -> statement column
    let mut column_of = vec![None; elements.len()];
    let mut statement_ids = Vec::new();
    for (i, e) in elements.iter().enumerate() {
        if e.kind == ElementKind::Statement {
            column_of[i] = Some(statement_ids.len());
            statement_ids.push(e.id.clone());
        }
    }

    let row_of: HashMap<&str, usize> = tests.iter().enumerate().map(|(i, t)| (t.id.as_str(), i)).collect();
    let mut hits: Vec<Option<Vec<usize>>> = vec![None; tests.len()];
    for (i, entry) in doc.coverage.iter().enumerate() {
        let test = match &entry.test {
            Some(id) => id.as_str(),
            None => match doc.tests.get(i) {
                Some(t) => t.id.as_str(),
                None => {
                    return Err(Error::reference(
                        format!("coverage[{i}]"),
                        format!("positional row without a test ({} tests)", doc.tests.len()),
                    ))
                }
            },
        };
        if dropped.contains(test) {
            continue;
        }
        let Some(&row) = row_of.get(test) else {
            return Err(Error::reference(format!("coverage[{i}]"), format!("unknown test `{test}`")));
        };
        if hits[row].is_some() {
            return Err(Error::schema(
                format!("coverage[{i}]"),
                format!("duplicate coverage entry for test `{test}`"),
            ));
        }
        let mut cols = Vec::with_capacity(entry.elements.len());
        for (j, &idx) in entry.elements.iter().enumerate() {
            let Some(element) = elements.get(idx) else {
                return Err(Error::reference(
                    format!("coverage[{i}].elements[{j}]"),
                    format!("index {idx} out of range ({} elements)", elements.len()),
                ));
            };
            let Some(col) = column_of[idx] else {
                return Err(Error::reference(
                    format!("coverage[{i}].elements[{j}]"),
                    format!("index {idx} refers to {} `{}`, not a statement", element.kind, element.id),
                ));
            };
            cols.push(col);
        }
        hits[row] = Some(cols);
    }
    let hits: Vec<Vec<usize>> = hits.into_iter().map(Option::unwrap_or_default).collect();

    let matrix = CoverageMatrix::from_hits(tests.iter().map(|t| t.id.clone()).collect(), statement_ids, &hits)?;
    SpectraSet::new(elements, tests, matrix)
}

/// Converts validated spectra back into a document. Synthetic enclosures are
/// left out, so re-ingesting the document reproduces the same spectra.
pub fn to_document(spectra: &SpectraSet) -> SpectraDocument {
    let declared: Vec<&ProgramElement> = spectra.declared_elements().collect();
    let index_of: HashMap<&str, usize> =
        declared.iter().enumerate().map(|(i, e)| (e.id.as_str(), i)).collect();

    let elements = declared
        .iter()
        .map(|e| ElementEntry {
            id: e.id.clone(),
            kind: e.kind,
            file: e.file.clone(),
            line: e.line,
            end_line: Some(e.end_line),
            parent_id: e
                .parent_id
                .clone()
                .filter(|p| spectra.element(p).is_some_and(|p| !p.synthetic)),
            display_name: (e.display_name != e.id).then(|| e.display_name.clone()),
            extra: BTreeMap::new(),
        })
        .collect();

    let matrix = spectra.matrix();
    let coverage = spectra
        .tests()
        .iter()
        .enumerate()
        .map(|(row, t)| CoverageEntry {
            test: Some(t.id.clone()),
            elements: matrix
                .hits(row)
                .into_iter()
                .map(|col| index_of[matrix.elements()[col].as_str()])
                .collect(),
            extra: BTreeMap::new(),
        })
        .collect();

    SpectraDocument {
        schema_version: SCHEMA_VERSION.to_string(),
        tests: spectra
            .tests()
            .iter()
            .map(|t| TestEntry {
                id: t.id.clone(),
                outcome: match t.outcome {
                    Outcome::Passed => "passed",
                    Outcome::Failed => "failed",
                }
                .to_string(),
                extra: BTreeMap::new(),
            })
            .collect(),
        elements,
        coverage,
        extra: BTreeMap::new(),
    }
}

/// Serializes spectra as pretty-printed interchange JSON.
pub fn emit_spectra(spectra: &SpectraSet) -> String {
    let mut out = serde_json::to_string_pretty(&to_document(spectra)).expect("document serializes");
    out.push('\n');
    out
}

// positional rows lose their meaning once tests are concatenated
fn pin_positional(doc: &mut SpectraDocument) {
    for (entry, t) in doc.coverage.iter_mut().zip(&doc.tests) {
        if entry.test.is_none() {
            entry.test = Some(t.id.clone());
        }
    }
}

/// Concatenates the test rows of several documents over the same elements.
pub fn merge_runs(docs: Vec<SpectraDocument>) -> Result<SpectraSet> {
    let mut docs = docs.into_iter().map(|mut d| {
        pin_positional(&mut d);
        d
    });
    let Some(mut merged) = docs.next() else {
        return Err(Error::EmptyInput("no documents to merge".into()));
    };
    let mut test_ids: HashSet<String> = merged.tests.iter().map(|t| t.id.clone()).collect();
    for (n, doc) in docs.enumerate() {
        let n = n + 1;
        if doc.elements.len() != merged.elements.len()
            || !doc.elements.iter().zip(&merged.elements).all(|(a, b)| a.same_element(b))
        {
            let first_diff = doc
                .elements
                .iter()
                .zip(&merged.elements)
                .position(|(a, b)| !a.same_element(b))
                .unwrap_or(doc.elements.len().min(merged.elements.len()));
            return Err(Error::MergeConflict(format!(
                "document {n} differs from document 0 at elements[{first_diff}]"
            )));
        }
        for t in &doc.tests {
            if !test_ids.insert(t.id.clone()) {
                return Err(Error::MergeConflict(format!(
                    "test `{}` of document {n} already appears in an earlier document",
                    t.id
                )));
            }
        }
        merged.tests.extend(doc.tests);
        merged.coverage.extend(doc.coverage);
    }
    assemble(merged)
}

/// Reads one document, or merges several shards.
pub fn load_spectra<P: AsRef<Path>>(paths: &[P]) -> Result<SpectraSet> {
    let docs = paths
        .iter()
        .map(|p| {
            let p = p.as_ref();
            let bytes = std::fs::read(p).map_err(|source| Error::Io {
                path: PathBuf::from(p),
                source,
            })?;
            parse_document(&bytes)
        })
        .collect::<Result<Vec<_>>>()?;
    merge_runs(docs)
}
