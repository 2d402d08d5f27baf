//! Reading tabular sentence-pair files into [`LabeledDataset`]s.
//!
//! Parsing is lenient per row and strict per file: structurally broken rows
//! (wrong column count, non-binary label, blank sentence, undecodable bytes)
//! are skipped and reported, while an unreadable stream is a hard error.
//! Surviving rows are interned and accumulated, then frozen into a dataset
//! in one pass so that duplicate handling never depends on row order:
//! same-label duplicates merge into one pair, and a pair asserted with both
//! labels somewhere in the file is excluded outright and reported as a raw
//! conflict.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{self, BufReader};
use std::path::Path;

use serde::Serialize;

use super::{
    canonicalize_sentence, FormatConfig, Label, LabeledDataset, LabeledPair, NodeId, Provenance,
    Sentence, Split,
};
use crate::error::Error;
use crate::Result;

/// Everything noteworthy that happened while parsing one file.
///
/// `rows_read` counts data records (header excluded); `rows_used` counts the
/// structurally valid ones, including rows that later fell to self-pair or
/// raw-conflict handling.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ParseReport {
    pub rows_read: u64,
    pub rows_used: u64,
    pub merged_duplicates: u64,
    pub skipped: Vec<SkippedRow>,
    pub raw_conflicts: Vec<RawConflict>,
    pub self_pairs: Vec<SelfPairDrop>,
}

impl ParseReport {
    pub fn is_clean(&self) -> bool {
        self.skipped.is_empty() && self.raw_conflicts.is_empty() && self.self_pairs.is_empty()
    }

    /// True when the file had rows but none of them were usable, i.e. the
    /// file as a whole is not in the expected format.
    pub fn unusable(&self) -> bool {
        self.rows_read > 0 && self.rows_used == 0
    }

    /// Input rows excluded because their pair carried both labels.
    pub fn n_conflict_rows(&self) -> u64 {
        self.raw_conflicts
            .iter()
            .map(|c| (c.positive_rows.len() + c.negative_rows.len()) as u64)
            .sum()
    }
}

/// A row that did not survive structural checks. `row` is 1-based over data
/// records.
#[derive(Debug, Clone, Serialize)]
pub struct SkippedRow {
    pub row: u64,
    pub reason: SkipReason,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SkipReason {
    WrongColumnCount { found: usize, expected: usize },
    NonBinaryLabel { value: String },
    EmptySentence { column: usize },
    UndecodableRecord { detail: String },
}

impl SkipReason {
    pub fn describe(&self) -> String {
        match self {
            SkipReason::WrongColumnCount { found, expected } => {
                format!("wrong column count (found {found}, expected at least {expected})")
            }
            SkipReason::NonBinaryLabel { value } => format!("non-binary label {value:?}"),
            SkipReason::EmptySentence { column } => {
                format!("empty sentence in column {column}")
            }
            SkipReason::UndecodableRecord { detail } => format!("undecodable record: {detail}"),
        }
    }
}

/// The same sentence pair asserted with both labels. All involved rows are
/// excluded from the dataset; downstream stages never see the pair.
#[derive(Debug, Clone, Serialize)]
pub struct RawConflict {
    pub a: NodeId,
    pub b: NodeId,
    pub positive_rows: Vec<u64>,
    pub negative_rows: Vec<u64>,
}

/// A row pairing a sentence with itself. Benign when positive (a tautology),
/// anomalous when negative (a sentence declared distinct from itself); both
/// are dropped.
#[derive(Debug, Clone, Serialize)]
pub struct SelfPairDrop {
    pub row: u64,
    pub node: NodeId,
    pub label: Label,
}

impl SelfPairDrop {
    pub fn anomalous(&self) -> bool {
        self.label == Label::Negative
    }
}

#[derive(Default)]
struct Interner {
    by_text: HashMap<String, NodeId>,
    sentences: Vec<Sentence>,
}

impl Interner {
    fn intern(&mut self, text: String) -> NodeId {
        if let Some(&id) = self.by_text.get(&text) {
            return id;
        }
        let id = NodeId(self.sentences.len() as u32);
        self.by_text.insert(text.clone(), id);
        self.sentences.push(Sentence {
            id,
            text,
            source_ids: Default::default(),
        });
        id
    }

    fn add_source(&mut self, id: NodeId, source: &str) {
        let source = source.trim();
        if !source.is_empty() {
            self.sentences[id.index()].source_ids.insert(source.to_owned());
        }
    }
}

fn clip(value: &str) -> String {
    const MAX: usize = 80;
    if value.chars().count() <= MAX {
        value.to_owned()
    } else {
        let cut: String = value.chars().take(MAX).collect();
        format!("{cut}…")
    }
}

/// Parses one file into a dataset plus a report of everything skipped,
/// merged, or excluded.
///
/// Node ids are assigned by first appearance (row by row, left sentence
/// first). The returned dataset is canonical: pairs sorted by `(a, b)`,
/// unique, self-loop free, every pair `Original` provenance.
pub fn parse_dataset<R: io::Read>(
    source: R,
    config: &FormatConfig,
    split: Split,
) -> Result<(LabeledDataset, ParseReport)> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(config.delimiter)
        .has_headers(config.has_header)
        .quoting(config.quoting)
        .flexible(true)
        .from_reader(source);

    let cols = &config.columns;
    let required = cols.required_columns();

    let mut report = ParseReport::default();
    let mut interner = Interner::default();
    // (a, b) -> (positive rows, negative rows); ordered so that freezing it
    // yields sorted pairs no matter the row order.
    let mut acc: BTreeMap<(NodeId, NodeId), (Vec<u64>, Vec<u64>)> = BTreeMap::new();

    for record in reader.records() {
        report.rows_read += 1;
        let row = report.rows_read;
        let record = match record {
            Ok(r) => r,
            Err(e) => match e.kind() {
                csv::ErrorKind::Io(_) => {
                    return Err(match e.into_kind() {
                        csv::ErrorKind::Io(io_err) => Error::Io(io_err),
                        _ => unreachable!("kind checked above"),
                    });
                }
                _ => {
                    report.skipped.push(SkippedRow {
                        row,
                        reason: SkipReason::UndecodableRecord {
                            detail: e.to_string(),
                        },
                    });
                    continue;
                }
            },
        };

        if record.len() < required {
            report.skipped.push(SkippedRow {
                row,
                reason: SkipReason::WrongColumnCount {
                    found: record.len(),
                    expected: required,
                },
            });
            continue;
        }

        let label = match Label::from_field(record[cols.label].trim()) {
            Some(label) => label,
            None => {
                report.skipped.push(SkippedRow {
                    row,
                    reason: SkipReason::NonBinaryLabel {
                        value: clip(&record[cols.label]),
                    },
                });
                continue;
            }
        };

        let mut texts = [None, None];
        let mut bad_column = None;
        for (slot, column) in texts.iter_mut().zip([cols.text_a, cols.text_b]) {
            match canonicalize_sentence(&record[column]) {
                Ok(text) => *slot = Some(text),
                Err(_) => {
                    bad_column = Some(column);
                    break;
                }
            }
        }
        if let Some(column) = bad_column {
            report.skipped.push(SkippedRow {
                row,
                reason: SkipReason::EmptySentence { column },
            });
            continue;
        }
        let [text_a, text_b] = texts.map(Option::unwrap);

        report.rows_used += 1;

        let node_a = interner.intern(text_a);
        let node_b = interner.intern(text_b);
        if let Some(col) = cols.source_a {
            interner.add_source(node_a, &record[col]);
        }
        if let Some(col) = cols.source_b {
            interner.add_source(node_b, &record[col]);
        }

        if node_a == node_b {
            report.self_pairs.push(SelfPairDrop {
                row,
                node: node_a,
                label,
            });
            continue;
        }

        let key = if node_a < node_b {
            (node_a, node_b)
        } else {
            (node_b, node_a)
        };
        let slot = acc.entry(key).or_default();
        match label {
            Label::Positive => slot.0.push(row),
            Label::Negative => slot.1.push(row),
        }
    }

    let mut pairs = Vec::with_capacity(acc.len());
    for ((a, b), (positive_rows, negative_rows)) in acc {
        if !positive_rows.is_empty() && !negative_rows.is_empty() {
            report.raw_conflicts.push(RawConflict {
                a,
                b,
                positive_rows,
                negative_rows,
            });
            continue;
        }
        let (label, rows) = if positive_rows.is_empty() {
            (Label::Negative, negative_rows)
        } else {
            (Label::Positive, positive_rows)
        };
        report.merged_duplicates += rows.len() as u64 - 1;
        pairs.push(LabeledPair {
            a,
            b,
            label,
            provenance: Provenance::Original,
            row_ids: rows.into_iter().collect(),
        });
    }

    let dataset = LabeledDataset {
        split,
        sentences: interner.sentences,
        pairs,
    };
    debug_assert!(dataset.validate().is_ok());
    Ok((dataset, report))
}

/// [`parse_dataset`] over a file path.
pub fn parse_dataset_path(
    path: impl AsRef<Path>,
    config: &FormatConfig,
    split: Split,
) -> Result<(LabeledDataset, ParseReport)> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io_path(path, e))?;
    parse_dataset(BufReader::new(file), config, split)
}
