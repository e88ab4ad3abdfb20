//! JSON and CSV shapes for command output.

use std::io::Write;

use rationale_core::eval::{FoldSummary, JaccardCell, RecallCell};
use rationale_core::{
    DocScore, ExperimentConfig, ExperimentResult, ExplanationReport, KeywordContribution,
    RescueCandidate,
};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct SnippetJson {
    pub start: usize,
    pub end: usize,
    pub snippet_score: f64,
    pub complement_score: f64,
    pub token_score: f64,
    pub fused_score: f64,
    /// 1-based position by fused score.
    pub rank: usize,
}

#[derive(Debug, Serialize)]
pub struct ExplanationJson<'a> {
    pub id: &'a str,
    pub doc_score: f64,
    pub classified_responsive: bool,
    pub snippets: Vec<SnippetJson>,
    pub keywords: &'a [KeywordContribution],
    pub flip_set: Option<&'a [String]>,
}

impl<'a> From<&'a ExplanationReport> for ExplanationJson<'a> {
    fn from(r: &'a ExplanationReport) -> Self {
        Self {
            id: &r.id,
            doc_score: r.doc_score,
            classified_responsive: r.classified_responsive,
            snippets: r
                .snippets
                .iter()
                .enumerate()
                .map(|(i, s)| SnippetJson {
                    start: s.snippet.span.start,
                    end: s.snippet.span.end,
                    snippet_score: s.snippet_score,
                    complement_score: s.complement_score,
                    token_score: s.token_score,
                    fused_score: s.fused_score,
                    rank: i + 1,
                })
                .collect(),
            keywords: &r.keywords,
            flip_set: r.flip_set.as_deref(),
        }
    }
}

/// Truncates each report to its first `top_k` snippets.
pub fn explanations_json(reports: &[ExplanationReport], top_k: usize) -> String {
    let out: Vec<ExplanationJson<'_>> = reports
        .iter()
        .map(|r| {
            let mut j = ExplanationJson::from(r);
            j.snippets.truncate(top_k);
            j
        })
        .collect();
    serde_json::to_string_pretty(&out).expect("report serialization is infallible") + "\n"
}

#[derive(Debug, Serialize)]
pub struct ExperimentJson<'a> {
    pub recall: &'a [RecallCell],
    pub jaccard: &'a [JaccardCell],
    pub cutoffs: Vec<f64>,
    pub mean_accuracy: f64,
    pub folds: &'a [FoldSummary],
    pub config: &'a ExperimentConfig,
}

pub fn experiment_json(result: &ExperimentResult, config: &ExperimentConfig) -> String {
    let j = ExperimentJson {
        recall: &result.recall,
        jaccard: &result.jaccard,
        cutoffs: result.cutoffs(),
        mean_accuracy: result.mean_accuracy(),
        folds: &result.folds,
        config,
    };
    serde_json::to_string_pretty(&j).expect("report serialization is infallible") + "\n"
}

fn to_csv<T: Serialize>(rows: impl IntoIterator<Item = T>) -> csv::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Recall table, one row per (n, K, method, population).
pub fn recall_csv(result: &ExperimentResult) -> csv::Result<String> {
    to_csv(&result.recall)
}

pub fn scores_json(scores: &[DocScore]) -> String {
    serde_json::to_string_pretty(scores).expect("score serialization is infallible") + "\n"
}

pub fn scores_csv(scores: &[DocScore]) -> csv::Result<String> {
    to_csv(scores)
}

#[derive(Serialize)]
struct RescueRow<'a> {
    doc_id: &'a str,
    doc_score: f64,
    start: usize,
    end: usize,
    best_snippet_score: f64,
}

pub fn rescue_json(found: &[RescueCandidate]) -> String {
    serde_json::to_string_pretty(found).expect("rescue serialization is infallible") + "\n"
}

pub fn rescue_csv(found: &[RescueCandidate]) -> csv::Result<String> {
    to_csv(found.iter().map(|c| RescueRow {
        doc_id: &c.doc_id,
        doc_score: c.doc_score,
        start: c.best_span.start,
        end: c.best_span.end,
        best_snippet_score: c.best_snippet_score,
    }))
}

pub fn write_or_print(out: Option<&std::path::Path>, text: &str) -> std::io::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}
