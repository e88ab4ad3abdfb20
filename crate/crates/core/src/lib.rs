//! Rationale extraction for linear document classifiers.
//!
//! A logistic-regression document model is trained on normalized-frequency
//! bag-of-words vectors. The same model then explains its responsive
//! decisions: each document is cut into overlapping token windows, and every
//! window is scored three ways (as a standalone document, by the score drop
//! its removal causes, and by the share of keyword contribution it covers).
//! The component scores are fused by weighted sum or reciprocal rank fusion
//! and the best windows are reported as rationales.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! synthetic corpora live in the companion `rationale` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod corpus;
pub mod error;
pub mod eval;
pub mod explain;
pub mod features;
pub mod math;
pub mod model;

pub use corpus::{
    filter_annotated, ingest, locate_rationale, make_folds, tokenize, Corpus, Document,
    FilterCounts, FilteredCorpus, FoldAssignment, IngestSummary, Label, RawRecord, TokenSpan,
};
pub use error::{Error, Result};
pub use eval::{
    rescue_false_negatives, run_experiment, ExperimentConfig, ExperimentResult, FlagRule,
    MatchCriterion, Method, Population, RescueCandidate,
};
pub use explain::{
    build_keyword_lexicon, complement_score, cscore, explain_document, fuse, generate_snippets,
    minimal_flip_set, rrf_score, score_snippets, select_rationales, snippet_score,
    snippet_token_score, DocumentScorer, ExplainConfig, ExplanationReport, FlipOutcome,
    FusionConfig, FusionMode, KeywordContribution, KeywordLexicon, ScoredSnippet,
    SelectionPolicy, Snippet,
};
pub use features::{build_vocabulary, vectorize, vectorize_complement, FeatureVector, Vocabulary};
pub use model::{
    loss_and_gradient, score, score_documents, select_cutoff, train, train_from, DocScore,
    LinearModel, TrainConfig, TrainReport,
};
