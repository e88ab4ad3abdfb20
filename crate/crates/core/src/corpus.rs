//! Documents, tokenization, rationale annotations and cross-validation folds.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Shortest rationale (in tokens) kept by [`filter_annotated`] by default.
pub const MIN_RATIONALE_LEN: usize = 10;
/// Longest rationale (in tokens) kept by [`filter_annotated`] by default.
pub const MAX_RATIONALE_LEN: usize = 249;

/// Splits text into lowercase alphanumeric runs.
///
/// Any maximal run of non-alphanumeric characters is a separator; digits are
/// kept.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(|t| t.to_lowercase())
        .collect()
}

/// Half-open token range `[start, end)` inside a document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TokenSpan {
    pub start: usize,
    pub end: usize,
}

impl TokenSpan {
    pub fn new(start: usize, end: usize) -> Result<Self> {
        if start < end {
            Ok(Self { start, end })
        } else {
            Err(Error::InvalidSpan { start, end })
        }
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    /// Number of tokens shared with `other`.
    pub fn overlap(&self, other: &TokenSpan) -> usize {
        let lo = self.start.max(other.start);
        let hi = self.end.min(other.end);
        hi.saturating_sub(lo)
    }
}

impl fmt::Display for TokenSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.start, self.end)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Label {
    Responsive,
    NotResponsive,
    Unlabeled,
}

impl Label {
    pub fn name(self) -> &'static str {
        match self {
            Label::Responsive => "responsive",
            Label::NotResponsive => "not_responsive",
            Label::Unlabeled => "unlabeled",
        }
    }

    pub fn is_labeled(self) -> bool {
        self != Label::Unlabeled
    }
}

/// A tokenized document with its label and located rationale spans.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    id: String,
    raw_text: String,
    tokens: Vec<String>,
    label: Label,
    rationale_spans: Vec<TokenSpan>,
}

impl Document {
    /// Tokenizes `raw_text` and checks the spans against the token count.
    pub fn new(
        id: impl Into<String>,
        raw_text: impl Into<String>,
        label: Label,
        rationale_spans: Vec<TokenSpan>,
    ) -> Result<Self> {
        let id = id.into();
        let raw_text = raw_text.into();
        let tokens = tokenize(&raw_text);
        if !rationale_spans.is_empty() && label != Label::Responsive {
            return Err(Error::InvalidDocument {
                id,
                reason: "rationale spans are only allowed on responsive documents".to_string(),
            });
        }
        for span in &rationale_spans {
            if span.start >= span.end || span.end > tokens.len() {
                return Err(Error::InvalidDocument {
                    id,
                    reason: alloc::format!(
                        "rationale span {span} outside document of {} tokens",
                        tokens.len()
                    ),
                });
            }
        }
        Ok(Self {
            id,
            raw_text,
            tokens,
            label,
            rationale_spans,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn raw_text(&self) -> &str {
        &self.raw_text
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn label(&self) -> Label {
        self.label
    }

    pub fn rationale_spans(&self) -> &[TokenSpan] {
        &self.rationale_spans
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    fn with_spans(&self, rationale_spans: Vec<TokenSpan>) -> Self {
        Self {
            rationale_spans,
            ..self.clone()
        }
    }
}

/// An immutable collection of documents with unique ids.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    documents: Vec<Document>,
    source_path: String,
}

impl Corpus {
    pub fn new(documents: Vec<Document>, source_path: impl Into<String>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for doc in &documents {
            if !seen.insert(doc.id.as_str()) {
                return Err(Error::DuplicateId(doc.id.clone()));
            }
        }
        Ok(Self {
            documents,
            source_path: source_path.into(),
        })
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn source_path(&self) -> &str {
        &self.source_path
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Document> {
        self.documents.iter().find(|d| d.id == id)
    }
}

/// Returns the first contiguous occurrence of `rationale_text`'s tokens.
///
/// `None` when the rationale does not occur verbatim (after tokenization),
/// e.g. reviewer comments that are not part of the document.
pub fn locate_rationale(doc_tokens: &[String], rationale_text: &str) -> Option<TokenSpan> {
    let needle = tokenize(rationale_text);
    if needle.is_empty() || needle.len() > doc_tokens.len() {
        return None;
    }
    doc_tokens
        .windows(needle.len())
        .position(|w| w == needle.as_slice())
        .map(|start| TokenSpan {
            start,
            end: start + needle.len(),
        })
}

/// One corpus record before tokenization and rationale location.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RawRecord {
    pub id: String,
    pub text: String,
    pub label: Option<Label>,
    /// Rationale passages quoted from the text.
    pub rationales: Vec<String>,
    /// Explicit token spans; take precedence over `rationales` when present.
    pub rationale_spans: Option<Vec<(usize, usize)>>,
}

/// Counts reported by [`ingest`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IngestSummary {
    pub documents_read: usize,
    pub responsive: usize,
    pub not_responsive: usize,
    pub unlabeled: usize,
    pub explicit_spans: usize,
    pub rationales_located: usize,
    pub rationales_unlocated: usize,
}

/// Tokenizes records, locates quoted rationales and builds a [`Corpus`].
pub fn ingest<I>(records: I, source_path: &str) -> Result<(Corpus, IngestSummary)>
where
    I: IntoIterator<Item = RawRecord>,
{
    let mut summary = IngestSummary::default();
    let mut documents = Vec::new();
    for rec in records {
        summary.documents_read += 1;
        let label = rec.label.unwrap_or(Label::Unlabeled);
        match label {
            Label::Responsive => summary.responsive += 1,
            Label::NotResponsive => summary.not_responsive += 1,
            Label::Unlabeled => summary.unlabeled += 1,
        }
        let has_rationales =
            !rec.rationales.is_empty() || rec.rationale_spans.as_ref().is_some_and(|s| !s.is_empty());
        if has_rationales && label != Label::Responsive {
            return Err(Error::InvalidDocument {
                id: rec.id,
                reason: "rationales given for a document not labeled responsive".to_string(),
            });
        }
        let tokens = tokenize(&rec.text);
        let spans = match rec.rationale_spans {
            Some(explicit) => {
                summary.explicit_spans += explicit.len();
                explicit
                    .into_iter()
                    .map(|(s, e)| TokenSpan::new(s, e))
                    .collect::<Result<Vec<_>>>()
                    .map_err(|e| Error::InvalidDocument {
                        id: rec.id.clone(),
                        reason: e.to_string(),
                    })?
            }
            None => {
                let mut spans = Vec::new();
                for text in &rec.rationales {
                    match locate_rationale(&tokens, text) {
                        Some(span) => {
                            summary.rationales_located += 1;
                            spans.push(span);
                        }
                        None => summary.rationales_unlocated += 1,
                    }
                }
                spans
            }
        };
        documents.push(Document::new(rec.id, rec.text, label, spans)?);
    }
    Ok((Corpus::new(documents, source_path)?, summary))
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FilterCounts {
    pub spans_kept: usize,
    pub spans_too_short: usize,
    pub spans_too_long: usize,
    /// Responsive documents that keep at least one span.
    pub annotated_documents: usize,
    /// Responsive documents left without spans (still used for training).
    pub responsive_without_spans: usize,
}

/// A corpus whose spans passed the length filter, plus the annotated population.
#[derive(Debug, Clone, PartialEq)]
pub struct FilteredCorpus {
    pub corpus: Corpus,
    pub annotated: BTreeSet<String>,
    pub counts: FilterCounts,
}

impl FilteredCorpus {
    pub fn is_annotated(&self, id: &str) -> bool {
        self.annotated.contains(id)
    }
}

/// Keeps rationale spans whose length lies in `[min_len, max_len]`.
pub fn filter_annotated(corpus: &Corpus, min_len: usize, max_len: usize) -> FilteredCorpus {
    let mut counts = FilterCounts::default();
    let mut annotated = BTreeSet::new();
    let mut documents = Vec::with_capacity(corpus.len());
    for doc in corpus.documents() {
        let mut kept = Vec::new();
        for span in doc.rationale_spans() {
            let len = span.len();
            if len < min_len {
                counts.spans_too_short += 1;
            } else if len > max_len {
                counts.spans_too_long += 1;
            } else {
                counts.spans_kept += 1;
                kept.push(*span);
            }
        }
        if doc.label() == Label::Responsive {
            if kept.is_empty() {
                counts.responsive_without_spans += 1;
            } else {
                counts.annotated_documents += 1;
                annotated.insert(doc.id.clone());
            }
        }
        documents.push(doc.with_spans(kept));
    }
    FilteredCorpus {
        corpus: Corpus {
            documents,
            source_path: corpus.source_path.clone(),
        },
        annotated,
        counts,
    }
}

/// Stratified assignment of document ids to `k` folds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldAssignment {
    folds: BTreeMap<String, usize>,
    k: usize,
    seed: u64,
}

impl FoldAssignment {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn fold_of(&self, id: &str) -> Option<usize> {
        self.folds.get(id).copied()
    }

    /// Ids in `fold`, in lexicographic order.
    pub fn members(&self, fold: usize) -> impl Iterator<Item = &str> {
        self.folds
            .iter()
            .filter(move |(_, &f)| f == fold)
            .map(|(id, _)| id.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.folds.iter().map(|(id, &f)| (id.as_str(), f))
    }
}

/// Deals each label class round-robin over `k` folds after a seeded shuffle.
pub fn make_folds(corpus: &Corpus, k: usize, seed: u64) -> Result<FoldAssignment> {
    if k < 2 {
        return Err(Error::BadFoldCount(k));
    }
    if corpus.is_empty() {
        return Err(Error::Empty("corpus"));
    }
    let mut by_class: BTreeMap<Label, Vec<&str>> = BTreeMap::new();
    for doc in corpus.documents() {
        by_class.entry(doc.label()).or_default().push(doc.id());
    }
    for (label, ids) in &by_class {
        if ids.len() < k {
            return Err(Error::TooFewForFolds {
                k,
                class: label.name(),
                count: ids.len(),
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = BTreeMap::new();
    let mut next = 0usize;
    for (_, mut ids) in by_class {
        ids.sort_unstable();
        ids.shuffle(&mut rng);
        for id in ids {
            folds.insert(id.to_string(), next % k);
            next += 1;
        }
    }
    Ok(FoldAssignment { folds, k, seed })
}
