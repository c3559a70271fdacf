//! Split-and-Rephrase corpus data model and file formats.
//!
//! A [`Record`] pairs one complex sentence with its ordered simple
//! sentences. Two on-disk formats are supported:
//!
//! * TSV: `complex<TAB>simple_1 <::::> simple_2 ...`, one record per line.
//!   The simple-side separator is configurable.
//! * JSONL: `{"id": "...", "complex": "...", "simples": ["...", ...]}`,
//!   with `id` optional.
//!
//! All text is NFC-normalized and trimmed when a record is built, so two
//! records compare equal exactly when their normalized fields do.

mod detok;
mod io;
mod record;

pub use detok::{detokenize, DetokRules};
pub use io::{Format, RecordReader, RecordWriter};
pub use record::{parse_tsv_record, serialize_tsv_record, Field, Record};

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use thiserror::Error;

/// Separator between simple sentences in the WikiSplit TSV distribution.
pub const DEFAULT_SEPARATOR: &str = "<::::>";

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("expected exactly one TAB in a TSV record, found {found}")]
    MissingTab { found: usize },
    #[error("{0} is empty after trimming")]
    EmptyField(Field),
    #[error("{field} contains the delimiter {delimiter:?}")]
    DelimiterCollision { field: Field, delimiter: String },
    #[error("the simple-side separator must not be empty")]
    EmptySeparator,
    #[error("a record needs at least one simple sentence")]
    NoSimples,
    #[error("duplicate record id {0:?}")]
    DuplicateId(String),
    #[error("invalid JSON record: {0}")]
    Json(#[from] serde_json::Error),
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<CorpusError>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CorpusError {
    pub(crate) fn at_line(self, line: usize) -> Self {
        CorpusError::AtLine {
            line,
            source: Box::new(self),
        }
    }

    /// True when the error came from the underlying reader or writer rather
    /// than from malformed content.
    pub fn is_io(&self) -> bool {
        match self {
            CorpusError::Io(_) => true,
            CorpusError::AtLine { source, .. } => source.is_io(),
            _ => false,
        }
    }
}

/// An ordered collection of records with unique ids.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Corpus {
    records: Vec<Record>,
    ids: HashSet<String>,
    source_path: Option<PathBuf>,
}

impl Corpus {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_records(records: impl IntoIterator<Item = Record>) -> Result<Self, CorpusError> {
        let mut corpus = Corpus::new();
        for record in records {
            corpus.push(record)?;
        }
        Ok(corpus)
    }

    /// Appends a record, rejecting an id that is already present.
    pub fn push(&mut self, record: Record) -> Result<(), CorpusError> {
        if let Some(id) = record.id() {
            if !self.ids.insert(id.to_owned()) {
                return Err(CorpusError::DuplicateId(id.to_owned()));
            }
        }
        self.records.push(record);
        Ok(())
    }

    /// Reads a whole corpus file.
    pub fn load(
        path: impl AsRef<Path>,
        format: Format,
        separator: &str,
    ) -> Result<Self, CorpusError> {
        let path = path.as_ref();
        let file = std::fs::File::open(path)?;
        let reader = RecordReader::new(std::io::BufReader::new(file), format, separator)?;
        let mut corpus = Corpus::new();
        for (index, record) in reader.enumerate() {
            corpus.push(record?).map_err(|e| e.at_line(index + 1))?;
        }
        corpus.source_path = Some(path.to_path_buf());
        Ok(corpus)
    }

    pub fn write(
        &self,
        path: impl AsRef<Path>,
        format: Format,
        separator: &str,
    ) -> Result<(), CorpusError> {
        let file = std::fs::File::create(path)?;
        let mut writer = RecordWriter::new(std::io::BufWriter::new(file), format, separator)?;
        for record in &self.records {
            writer.write(record)?;
        }
        writer.finish()?;
        Ok(())
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn into_records(self) -> Vec<Record> {
        self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn source_path(&self) -> Option<&Path> {
        self.source_path.as_deref()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Record> {
        self.records.iter()
    }
}

impl<'a> IntoIterator for &'a Corpus {
    type Item = &'a Record;
    type IntoIter = std::slice::Iter<'a, Record>;

    fn into_iter(self) -> Self::IntoIter {
        self.records.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(id: Option<&str>, complex: &str) -> Record {
        Record::new(complex, vec!["A.".to_string()])
            .unwrap()
            .with_id(id.map(str::to_owned))
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let err =
            Corpus::from_records([rec(Some("x"), "One."), rec(Some("x"), "Two.")]).unwrap_err();
        assert!(matches!(err, CorpusError::DuplicateId(id) if id == "x"));
    }

    #[test]
    fn records_without_ids_never_collide() {
        let corpus = Corpus::from_records([rec(None, "One."), rec(None, "Two.")]).unwrap();
        assert_eq!(corpus.len(), 2);
    }

    #[test]
    fn load_then_write_preserves_order_and_count() {
        let dir = std::env::temp_dir().join(format!("splitrefine-corpus-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let input = dir.join("in.tsv");
        let output = dir.join("out.tsv");
        let text = "C one.\tA. <::::> B.\nC two.\tD.\nC three.\tE. <::::> F. <::::> G.\n";
        std::fs::write(&input, text).unwrap();

        let corpus = Corpus::load(&input, Format::Tsv, DEFAULT_SEPARATOR).unwrap();
        assert_eq!(corpus.len(), 3);
        assert_eq!(corpus.source_path(), Some(input.as_path()));
        corpus
            .write(&output, Format::Tsv, DEFAULT_SEPARATOR)
            .unwrap();
        assert_eq!(std::fs::read_to_string(&output).unwrap(), text);

        let jsonl = dir.join("out.jsonl");
        corpus
            .write(&jsonl, Format::Jsonl, DEFAULT_SEPARATOR)
            .unwrap();
        let back = Corpus::load(&jsonl, Format::Jsonl, DEFAULT_SEPARATOR).unwrap();
        assert_eq!(back.records(), corpus.records());
        std::fs::remove_dir_all(&dir).ok();
    }
}
