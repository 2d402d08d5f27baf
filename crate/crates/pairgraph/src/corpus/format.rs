//! Tabular layout description: which columns hold what, and how the file
//! is delimited.

use serde::{Deserialize, Serialize};

/// The two supported column layouts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layout {
    /// Six columns: `id, qid1, qid2, question1, question2, is_duplicate`.
    Qqp,
    /// Three columns: `sentence1, sentence2, label`.
    Generic,
}

/// Zero-based indices of the fields a row must provide.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnMap {
    pub text_a: usize,
    pub text_b: usize,
    pub label: usize,
    /// External id columns for the two sentences, when the layout has them.
    pub source_a: Option<usize>,
    pub source_b: Option<usize>,
}

impl ColumnMap {
    pub fn qqp() -> ColumnMap {
        ColumnMap {
            text_a: 3,
            text_b: 4,
            label: 5,
            source_a: Some(1),
            source_b: Some(2),
        }
    }

    pub fn generic() -> ColumnMap {
        ColumnMap {
            text_a: 0,
            text_b: 1,
            label: 2,
            source_a: None,
            source_b: None,
        }
    }

    /// Minimum number of fields a row needs for every mapped column to exist.
    pub fn required_columns(&self) -> usize {
        let mut max = self.text_a.max(self.text_b).max(self.label);
        for idx in [self.source_a, self.source_b].into_iter().flatten() {
            max = max.max(idx);
        }
        max + 1
    }
}

/// How to read and write one tabular dataset file.
///
/// Rows with more than [`ColumnMap::required_columns`] fields are accepted
/// on read; the extras are ignored. Writing always emits the canonical
/// column order for `layout`, plus a trailing `provenance` column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatConfig {
    pub layout: Layout,
    pub delimiter: u8,
    pub has_header: bool,
    /// Honor quote characters on read and quote as needed on write. Off for
    /// QQP-style TSV, where quotes are literal text.
    pub quoting: bool,
    pub columns: ColumnMap,
}

impl FormatConfig {
    /// Tab-separated GLUE QQP layout: header row, no quoting.
    pub fn qqp() -> FormatConfig {
        FormatConfig {
            layout: Layout::Qqp,
            delimiter: b'\t',
            has_header: true,
            quoting: false,
            columns: ColumnMap::qqp(),
        }
    }

    /// Minimal three-column layout: header row, quoting honored.
    pub fn generic() -> FormatConfig {
        FormatConfig {
            layout: Layout::Generic,
            delimiter: b'\t',
            has_header: true,
            quoting: true,
            columns: ColumnMap::generic(),
        }
    }

    pub fn for_layout(layout: Layout) -> FormatConfig {
        match layout {
            Layout::Qqp => FormatConfig::qqp(),
            Layout::Generic => FormatConfig::generic(),
        }
    }

    pub fn with_delimiter(mut self, delimiter: u8) -> FormatConfig {
        self.delimiter = delimiter;
        self
    }

    pub fn with_header(mut self, has_header: bool) -> FormatConfig {
        self.has_header = has_header;
        self
    }

    pub fn with_quoting(mut self, quoting: bool) -> FormatConfig {
        self.quoting = quoting;
        self
    }

    /// Header written (and expected) for this layout, `provenance` included.
    pub fn output_header(&self) -> &'static [&'static str] {
        match self.layout {
            Layout::Qqp => &[
                "id",
                "qid1",
                "qid2",
                "question1",
                "question2",
                "is_duplicate",
                "provenance",
            ],
            Layout::Generic => &["sentence1", "sentence2", "label", "provenance"],
        }
    }
}
