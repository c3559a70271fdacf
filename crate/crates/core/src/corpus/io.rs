use std::io::{BufRead, Write};
use std::path::Path;
use std::str::FromStr;

use super::{parse_tsv_record, serialize_tsv_record, CorpusError, Record};

/// On-disk corpus format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Tsv,
    Jsonl,
}

impl Format {
    /// Guesses the format from a file extension: `.jsonl`/`.json` is JSONL,
    /// anything else TSV.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl") | Some("json") => Format::Jsonl,
            _ => Format::Tsv,
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            Format::Tsv => "tsv",
            Format::Jsonl => "jsonl",
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "tsv" => Ok(Format::Tsv),
            "jsonl" => Ok(Format::Jsonl),
            other => Err(format!(
                "unknown corpus format {other:?} (expected tsv or jsonl)"
            )),
        }
    }
}

/// Streams records from a reader, one per line. Blank lines are skipped.
pub struct RecordReader<R> {
    inner: R,
    format: Format,
    separator: String,
    line: usize,
    buf: String,
}

impl<R: BufRead> RecordReader<R> {
    pub fn new(inner: R, format: Format, separator: &str) -> Result<Self, CorpusError> {
        if separator.is_empty() {
            return Err(CorpusError::EmptySeparator);
        }
        Ok(RecordReader {
            inner,
            format,
            separator: separator.to_owned(),
            line: 0,
            buf: String::new(),
        })
    }

    /// 1-based number of the line most recently read.
    pub fn line_number(&self) -> usize {
        self.line
    }
}

impl<R: BufRead> Iterator for RecordReader<R> {
    type Item = Result<Record, CorpusError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            self.buf.clear();
            match self.inner.read_line(&mut self.buf) {
                Ok(0) => return None,
                Ok(_) => self.line += 1,
                Err(e) => return Some(Err(CorpusError::Io(e).at_line(self.line + 1))),
            }
            if self.buf.trim().is_empty() {
                continue;
            }
            let parsed = match self.format {
                Format::Tsv => parse_tsv_record(&self.buf, &self.separator),
                Format::Jsonl => {
                    serde_json::from_str::<Record>(self.buf.trim_end()).map_err(CorpusError::from)
                }
            };
            return Some(parsed.map_err(|e| e.at_line(self.line)));
        }
    }
}

/// Writes records one per line, LF-terminated.
pub struct RecordWriter<W: Write> {
    inner: W,
    format: Format,
    separator: String,
}

impl<W: Write> RecordWriter<W> {
    pub fn new(inner: W, format: Format, separator: &str) -> Result<Self, CorpusError> {
        if separator.is_empty() {
            return Err(CorpusError::EmptySeparator);
        }
        Ok(RecordWriter {
            inner,
            format,
            separator: separator.to_owned(),
        })
    }

    pub fn write(&mut self, record: &Record) -> Result<(), CorpusError> {
        match self.format {
            Format::Tsv => {
                let line = serialize_tsv_record(record, &self.separator)?;
                self.inner.write_all(line.as_bytes())?;
            }
            Format::Jsonl => serde_json::to_writer(&mut self.inner, record)?,
        }
        self.inner.write_all(b"\n")?;
        Ok(())
    }

    /// Flushes and returns the inner writer.
    pub fn finish(mut self) -> Result<W, CorpusError> {
        self.inner.flush()?;
        Ok(self.inner)
    }
}
