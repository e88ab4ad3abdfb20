use alloc::string::String;
use alloc::vec::Vec;

use crate::corpus::{Document, TokenSpan};
use crate::error::Result;
use crate::explain::{build_keyword_lexicon, DocumentScorer};
use crate::model::LinearModel;

/// How below-cutoff documents are flagged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FlagRule {
    /// Best snippet score strictly above `θ`.
    Threshold(f64),
    /// The `M` documents with the highest best-snippet scores.
    TopM(usize),
}

/// A document the model rejects although one of its snippets scores high.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RescueCandidate {
    pub doc_id: String,
    pub doc_score: f64,
    pub best_span: TokenSpan,
    pub best_snippet_score: f64,
}

/// Flags documents scored below `cutoff` by their best `n`-token snippet.
///
/// Output is sorted by best snippet score, highest first (stable for ties).
pub fn rescue_false_negatives<'a, I>(
    model: &LinearModel,
    docs: I,
    cutoff: f64,
    n: usize,
    rule: FlagRule,
) -> Result<Vec<RescueCandidate>>
where
    I: IntoIterator<Item = &'a Document>,
{
    // no keyword component is needed here
    let lexicon = build_keyword_lexicon(model, 0, 0.0);
    let mut out = Vec::new();
    for doc in docs {
        let scorer = DocumentScorer::new(model, doc.tokens(), &lexicon);
        if scorer.doc_score() >= cutoff {
            continue;
        }
        if let Some((span, best)) = scorer.best_snippet(n)? {
            out.push(RescueCandidate {
                doc_id: doc.id().into(),
                doc_score: scorer.doc_score(),
                best_span: span,
                best_snippet_score: best,
            });
        }
    }
    out.sort_by(|a, b| b.best_snippet_score.total_cmp(&a.best_snippet_score));
    match rule {
        FlagRule::Threshold(theta) => out.retain(|c| c.best_snippet_score > theta),
        FlagRule::TopM(m) => out.truncate(m),
    }
    Ok(out)
}
