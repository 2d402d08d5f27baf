//! Writing datasets back out in canonical form.
//!
//! Output is deterministic: rows sorted by `(a, b)`, one row per pair, a
//! trailing `provenance` column after the layout's own columns. Writing a
//! parsed dataset therefore normalizes the file (duplicates merged,
//! whitespace collapsed, conflicting rows gone) rather than echoing it.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use super::{FormatConfig, LabeledDataset, Layout, Sentence, Split};
use crate::error::Error;
use crate::Result;

impl Sentence {
    /// External id a row should carry for this sentence: the numerically
    /// smallest source id (lexicographic when not all numeric), or the node
    /// id when the sentence never had one.
    pub fn canonical_source_id(&self) -> String {
        let mut numeric_min: Option<u64> = None;
        for s in &self.source_ids {
            match s.parse::<u64>() {
                Ok(v) => numeric_min = Some(numeric_min.map_or(v, |m| m.min(v))),
                Err(_) => {
                    numeric_min = None;
                    break;
                }
            }
        }
        if let Some(v) = numeric_min {
            return v.to_string();
        }
        match self.source_ids.iter().next() {
            Some(s) => s.clone(),
            None => self.id.to_string(),
        }
    }
}

/// Conventional file name for a split under the given delimiter.
pub fn dataset_file_name(split: Split, config: &FormatConfig) -> String {
    let ext = match config.delimiter {
        b'\t' => "tsv",
        b',' => "csv",
        _ => "txt",
    };
    format!("{split}.{ext}")
}

/// Writes `dataset` to `sink`. Returns the number of data rows written.
///
/// With quoting disabled every field must be free of the delimiter; that is
/// guaranteed for tab-delimited output (canonical text has no tabs) and
/// checked for anything else.
pub fn write_dataset<W: io::Write>(
    dataset: &LabeledDataset,
    sink: W,
    config: &FormatConfig,
) -> Result<u64> {
    dataset.validate()?;

    let mut writer = csv::WriterBuilder::new()
        .delimiter(config.delimiter)
        .quote_style(if config.quoting {
            csv::QuoteStyle::Necessary
        } else {
            csv::QuoteStyle::Never
        })
        .from_writer(sink);

    let check_field = |field: &str| -> Result<()> {
        if !config.quoting && config.delimiter != b'\t' && field.as_bytes().contains(&config.delimiter)
        {
            return Err(Error::InvalidConfig(format!(
                "field {field:?} contains the delimiter; enable quoting or pick another delimiter"
            )));
        }
        Ok(())
    };

    if config.has_header {
        writer.write_record(config.output_header()).map_err(stream_to_error)?;
    }

    let mut rows = 0u64;
    for pair in &dataset.pairs {
        rows += 1;
        let text_a = dataset.text(pair.a).expect("validated");
        let text_b = dataset.text(pair.b).expect("validated");
        check_field(text_a)?;
        check_field(text_b)?;
        match config.layout {
            Layout::Qqp => {
                let qid_a = dataset.sentences[pair.a.index()].canonical_source_id();
                let qid_b = dataset.sentences[pair.b.index()].canonical_source_id();
                writer
                    .write_record([
                        rows.to_string().as_str(),
                        qid_a.as_str(),
                        qid_b.as_str(),
                        text_a,
                        text_b,
                        pair.label.as_digit(),
                        pair.provenance.as_str(),
                    ])
                    .map_err(stream_to_error)?;
            }
            Layout::Generic => {
                writer
                    .write_record([
                        text_a,
                        text_b,
                        pair.label.as_digit(),
                        pair.provenance.as_str(),
                    ])
                    .map_err(stream_to_error)?;
            }
        }
    }
    writer.flush()?;
    Ok(rows)
}

/// [`write_dataset`] over a file path.
pub fn write_dataset_path(
    dataset: &LabeledDataset,
    path: impl AsRef<Path>,
    config: &FormatConfig,
) -> Result<u64> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io_path(path, e))?;
    let mut out = BufWriter::new(file);
    let rows = write_dataset(dataset, &mut out, config)?;
    out.flush().map_err(|e| Error::io_path(path, e))?;
    Ok(rows)
}

fn stream_to_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io_err) => Error::Io(io_err),
        other => Error::InvalidConfig(format!("csv write failed: {other:?}")),
    }
}
