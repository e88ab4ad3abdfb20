//! JSON-lines corpus files.
//!
//! One object per line:
//! `{"id", "text", "label": "responsive" | "not_responsive" | null, "rationales": [..], "rationale_spans": [[start, end], ..]}`.
//! `rationales` and `rationale_spans` are optional; explicit spans win when both are given.

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rationale_core::{ingest, Corpus, IngestSummary, Label, RawRecord};
use serde::{Deserialize, Serialize};

use crate::FormatError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FileLabel {
    Responsive,
    NotResponsive,
}

impl From<FileLabel> for Label {
    fn from(l: FileLabel) -> Self {
        match l {
            FileLabel::Responsive => Label::Responsive,
            FileLabel::NotResponsive => Label::NotResponsive,
        }
    }
}

/// One line of a corpus file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusRecord {
    pub id: String,
    pub text: String,
    #[serde(default)]
    pub label: Option<FileLabel>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rationales: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rationale_spans: Option<Vec<[usize; 2]>>,
}

impl From<CorpusRecord> for RawRecord {
    fn from(r: CorpusRecord) -> Self {
        RawRecord {
            id: r.id,
            text: r.text,
            label: r.label.map(Label::from),
            rationales: r.rationales,
            rationale_spans: r.rationale_spans.map(|s| s.into_iter().map(|[a, b]| (a, b)).collect()),
        }
    }
}

pub fn parse_records<R: BufRead>(reader: R, path: &Path) -> Result<Vec<CorpusRecord>, FormatError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|source| FormatError::Io {
            path: path.to_owned(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let rec = serde_json::from_str(&line).map_err(|source| FormatError::Json {
            path: path.to_owned(),
            line: i + 1,
            source,
        })?;
        out.push(rec);
    }
    Ok(out)
}

/// Reads and ingests a corpus file.
pub fn read_corpus(path: &Path) -> Result<(Corpus, IngestSummary), FormatError> {
    let file = std::fs::File::open(path).map_err(|source| FormatError::Io {
        path: path.to_owned(),
        source,
    })?;
    let records = parse_records(BufReader::new(file), path)?;
    ingest(records.into_iter().map(RawRecord::from), &path.display().to_string()).map_err(|source| {
        FormatError::Invalid {
            path: path.to_owned(),
            source,
        }
    })
}

pub fn write_records<W: Write>(records: &[CorpusRecord], mut writer: W) -> std::io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut writer, r)?;
        writer.write_all(b"\n")?;
    }
    writer.flush()
}
