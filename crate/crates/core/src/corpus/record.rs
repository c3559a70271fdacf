use std::fmt;

use serde::{Deserialize, Serialize};

use super::CorpusError;
use crate::text::nfc;

/// Names a record field in error messages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Complex,
    Simple(usize),
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Complex => f.write_str("complex sentence"),
            Field::Simple(i) => write!(f, "simple sentence {}", i + 1),
        }
    }
}

/// One training instance: a complex sentence and its simple sentences.
///
/// Fields are NFC-normalized and trimmed on construction. Neither side may
/// be empty, and no field may contain a TAB or a line break.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawRecord")]
pub struct Record {
    #[serde(skip_serializing_if = "Option::is_none")]
    id: Option<String>,
    complex: String,
    simples: Vec<String>,
}

#[derive(Deserialize)]
struct RawRecord {
    #[serde(default)]
    id: Option<String>,
    complex: String,
    simples: Vec<String>,
}

impl TryFrom<RawRecord> for Record {
    type Error = CorpusError;

    fn try_from(raw: RawRecord) -> Result<Self, Self::Error> {
        Ok(Record::new(raw.complex, raw.simples)?.with_id(raw.id))
    }
}

fn clean(text: &str, field: Field) -> Result<String, CorpusError> {
    let text = nfc(text.trim());
    if text.is_empty() {
        return Err(CorpusError::EmptyField(field));
    }
    for delimiter in ["\t", "\n", "\r"] {
        if text.contains(delimiter) {
            return Err(CorpusError::DelimiterCollision {
                field,
                delimiter: delimiter.to_owned(),
            });
        }
    }
    Ok(text)
}

impl Record {
    pub fn new<S: AsRef<str>>(
        complex: impl AsRef<str>,
        simples: impl IntoIterator<Item = S>,
    ) -> Result<Self, CorpusError> {
        let complex = clean(complex.as_ref(), Field::Complex)?;
        let simples = simples
            .into_iter()
            .enumerate()
            .map(|(i, s)| clean(s.as_ref(), Field::Simple(i)))
            .collect::<Result<Vec<_>, _>>()?;
        if simples.is_empty() {
            return Err(CorpusError::NoSimples);
        }
        Ok(Record {
            id: None,
            complex,
            simples,
        })
    }

    pub fn with_id(mut self, id: Option<String>) -> Self {
        self.id = id;
        self
    }

    pub fn id(&self) -> Option<&str> {
        self.id.as_deref()
    }

    pub fn complex(&self) -> &str {
        &self.complex
    }

    pub fn simples(&self) -> &[String] {
        &self.simples
    }

    /// The simple sentences joined by single spaces.
    pub fn joined_simples(&self) -> String {
        self.simples.join(" ")
    }

    pub(crate) fn reverse_simples_in_place(&mut self) {
        self.simples.reverse();
    }

    /// Replaces the simple side, keeping id and complex sentence.
    pub fn with_simples<S: AsRef<str>>(
        &self,
        simples: impl IntoIterator<Item = S>,
    ) -> Result<Self, CorpusError> {
        Ok(Record::new(&self.complex, simples)?.with_id(self.id.clone()))
    }
}

/// Parses one TSV line: `complex<TAB>simple_1 <sep> simple_2 ...`.
///
/// A trailing line terminator is ignored.
pub fn parse_tsv_record(line: &str, separator: &str) -> Result<Record, CorpusError> {
    if separator.is_empty() {
        return Err(CorpusError::EmptySeparator);
    }
    let line = line.strip_suffix('\n').unwrap_or(line);
    let line = line.strip_suffix('\r').unwrap_or(line);
    let tabs = line.matches('\t').count();
    if tabs != 1 {
        return Err(CorpusError::MissingTab { found: tabs });
    }
    let (complex, simple_side) = line.split_once('\t').expect("exactly one tab");
    Record::new(complex, simple_side.split(separator))
}

/// Inverse of [`parse_tsv_record`]. The record id is not part of the TSV
/// format and is dropped.
pub fn serialize_tsv_record(record: &Record, separator: &str) -> Result<String, CorpusError> {
    if separator.is_empty() {
        return Err(CorpusError::EmptySeparator);
    }
    let fields = std::iter::once((Field::Complex, record.complex())).chain(
        record
            .simples()
            .iter()
            .enumerate()
            .map(|(i, s)| (Field::Simple(i), s.as_str())),
    );
    for (field, text) in fields {
        for delimiter in ["\t", "\n", "\r", separator] {
            if text.contains(delimiter) {
                return Err(CorpusError::DelimiterCollision {
                    field,
                    delimiter: delimiter.to_owned(),
                });
            }
        }
    }
    let mut line = String::with_capacity(record.complex().len() * 2 + 16);
    line.push_str(record.complex());
    line.push('\t');
    for (i, simple) in record.simples().iter().enumerate() {
        if i > 0 {
            line.push(' ');
            line.push_str(separator);
            line.push(' ');
        }
        line.push_str(simple);
    }
    Ok(line)
}
