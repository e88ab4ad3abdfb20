//! Rationale snippets, keyword contributions and flip sets for one document.
//!
//! Every snippet gets three component scores, each in `[0, 1]`:
//!
//! | component  | meaning                                                        |
//! |------------|----------------------------------------------------------------|
//! | snippet    | the model's score of the snippet alone                         |
//! | complement | relative drop of the document score when the snippet is removed |
//! | token      | share of the document's keyword contribution inside the snippet |
//!
//! Ranks are computed per component within the document and the components
//! are fused into one ranking score (see [`fusion`]).

mod components;
mod flip;
pub mod fusion;
mod snippets;

use alloc::string::String;
use alloc::vec::Vec;

use crate::corpus::{Document, TokenSpan};
use crate::error::Result;
use crate::features::FeatureVector;
use crate::model::LinearModel;

pub use components::{
    build_keyword_lexicon, complement_from_scores, complement_score, cscore, snippet_score,
    snippet_token_score, KeywordLexicon, LexiconEntry, DEFAULT_TOP_KEYWORDS,
};
pub use flip::{delete_tokens, minimal_flip_set, FlipOutcome, FLIP_THRESHOLD};
pub use fusion::{
    apply_fusion, assign_ranks, fuse, fuse_components, rank_descending, rrf_score, FusionConfig,
    FusionMode, DEFAULT_RRF_K, DEFAULT_WEIGHTS,
};
pub use snippets::{generate_snippets, Snippet};

use components::{complement_from_scores as complement_of, empty_score, Contributions};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScoredSnippet {
    pub snippet: Snippet,
    pub snippet_score: f64,
    pub complement_score: f64,
    pub token_score: f64,
    pub fused_score: f64,
    /// 1-based ranks of (snippet, complement, token) scores within the document.
    pub ranks: [usize; 3],
}

impl ScoredSnippet {
    pub fn span(&self) -> TokenSpan {
        self.snippet.span
    }

    pub fn components(&self) -> [f64; 3] {
        [self.snippet_score, self.complement_score, self.token_score]
    }
}

/// Precomputed per-document state shared by every snippet size.
#[derive(Debug, Clone)]
pub struct DocumentScorer<'m> {
    model: &'m LinearModel,
    ids: Vec<Option<u32>>,
    doc_score: f64,
    contributions: Contributions,
}

impl<'m> DocumentScorer<'m> {
    pub fn new(model: &'m LinearModel, tokens: &[String], lexicon: &KeywordLexicon) -> Self {
        let ids = model.vocab().encode(tokens);
        let doc_vector = FeatureVector::from_encoded(ids.iter().copied());
        Self {
            model,
            doc_score: model.score(&doc_vector),
            contributions: Contributions::new(lexicon, &doc_vector),
            ids,
        }
    }

    pub fn doc_score(&self) -> f64 {
        self.doc_score
    }

    fn score_span(&self, span: TokenSpan) -> f64 {
        self.model
            .score(&FeatureVector::from_encoded(self.ids[span.start..span.end].iter().copied()))
    }

    fn complement(&self, span: TokenSpan) -> f64 {
        let rest = if span.len() == self.ids.len() {
            empty_score(self.model)
        } else {
            self.model.score(&FeatureVector::from_encoded_without(&self.ids, span))
        };
        complement_of(self.doc_score, rest)
    }

    /// Component scores and ranks for every window of size `n`, in span order.
    /// `fused_score` is left at zero.
    pub fn components(&self, n: usize) -> Result<Vec<ScoredSnippet>> {
        let mut out: Vec<ScoredSnippet> = generate_snippets(&self.ids, n)?
            .into_iter()
            .map(|snippet| ScoredSnippet {
                snippet,
                snippet_score: self.score_span(snippet.span),
                complement_score: self.complement(snippet.span),
                token_score: self.contributions.share(&self.ids, snippet.span),
                fused_score: 0.0,
                ranks: [0; 3],
            })
            .collect();
        assign_ranks(&mut out);
        Ok(out)
    }

    /// Fully scored snippets of size `n`, in span order.
    pub fn score(&self, n: usize, fusion: &FusionConfig) -> Result<Vec<ScoredSnippet>> {
        fusion.validate()?;
        let mut out = self.components(n)?;
        apply_fusion(&mut out, fusion);
        Ok(out)
    }

    /// Best snippet by standalone snippet score.
    pub fn best_snippet(&self, n: usize) -> Result<Option<(TokenSpan, f64)>> {
        let mut best: Option<(TokenSpan, f64)> = None;
        for s in generate_snippets(&self.ids, n)? {
            let score = self.score_span(s.span);
            if best.is_none_or(|(_, b)| score > b) {
                best = Some((s.span, score));
            }
        }
        Ok(best)
    }
}

/// Convenience wrapper around [`DocumentScorer::score`].
pub fn score_snippets(
    model: &LinearModel,
    doc: &Document,
    lexicon: &KeywordLexicon,
    n: usize,
    fusion: &FusionConfig,
) -> Result<Vec<ScoredSnippet>> {
    DocumentScorer::new(model, doc.tokens(), lexicon).score(n, fusion)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SelectionPolicy {
    TopK(usize),
    Threshold(f64),
}

/// Sorts by fused score, highest first; earlier spans win ties.
pub fn sort_by_fused(scored: &mut [ScoredSnippet]) {
    scored.sort_by(|a, b| {
        b.fused_score
            .total_cmp(&a.fused_score)
            .then(a.snippet.span.start.cmp(&b.snippet.span.start))
    });
}

/// The `K` best snippets, or all snippets scoring strictly above `θ`.
pub fn select_rationales(scored: &[ScoredSnippet], policy: SelectionPolicy) -> Vec<ScoredSnippet> {
    let mut sorted = scored.to_vec();
    sort_by_fused(&mut sorted);
    match policy {
        SelectionPolicy::TopK(k) => {
            sorted.truncate(k);
            sorted
        }
        SelectionPolicy::Threshold(theta) => sorted.into_iter().filter(|s| s.fused_score > theta).collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KeywordContribution {
    pub token: String,
    pub weight: f64,
    pub cscore: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExplainConfig {
    pub snippet_size: usize,
    pub fusion: FusionConfig,
    /// Document score at or above which the document counts as responsive.
    pub cutoff: f64,
}

/// Everything shown to a reviewer for one document.
#[derive(Debug, Clone, PartialEq)]
pub struct ExplanationReport {
    pub id: String,
    pub doc_score: f64,
    pub classified_responsive: bool,
    /// Sorted by fused score, best first.
    pub snippets: Vec<ScoredSnippet>,
    /// Lexicon tokens present in the document, by descending contribution.
    pub keywords: Vec<KeywordContribution>,
    pub flip_set: Option<Vec<String>>,
}

pub fn explain_document(
    model: &LinearModel,
    doc: &Document,
    lexicon: &KeywordLexicon,
    config: &ExplainConfig,
) -> Result<ExplanationReport> {
    let scorer = DocumentScorer::new(model, doc.tokens(), lexicon);
    let mut snippets = scorer.score(config.snippet_size, &config.fusion)?;
    sort_by_fused(&mut snippets);

    let doc_vector = FeatureVector::from_encoded(scorer.ids.iter().copied());
    let mut keywords: Vec<KeywordContribution> = lexicon
        .entries()
        .iter()
        .filter_map(|e| {
            let value = doc_vector.value(e.index);
            (value > 0.0).then(|| KeywordContribution {
                token: e.token.clone(),
                weight: e.weight,
                cscore: e.weight * value,
            })
        })
        .collect();
    keywords.sort_by(|a, b| b.cscore.total_cmp(&a.cscore).then_with(|| a.token.cmp(&b.token)));

    let flip_set = match minimal_flip_set(model, doc) {
        FlipOutcome::Flipped(tokens) => Some(tokens),
        _ => None,
    };
    Ok(ExplanationReport {
        id: doc.id().into(),
        doc_score: scorer.doc_score,
        classified_responsive: scorer.doc_score >= config.cutoff,
        snippets,
        keywords,
        flip_set,
    })
}
