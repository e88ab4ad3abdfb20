//! Rationale-detection metrics and the cross-validated experiment protocol.

mod experiment;
mod grid;
mod rescue;

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::corpus::TokenSpan;
use crate::explain::{fuse_components, FusionConfig, FusionMode, ScoredSnippet};

pub use experiment::{
    fold_assignment, run_experiment, run_fold, summarize, DocOutcome, ExperimentConfig, ExperimentResult, FoldOutcome,
    FoldSummary, GridSearchConfig, JaccardCell, Population, RecallCell, SelectedWeights,
};
pub use grid::{fusion_recall, grid_search_over, grid_search_weights, simplex_lattice, GridSearchResult, PreparedDoc};
pub use rescue::{rescue_false_negatives, FlagRule, RescueCandidate};

/// Overlap rule deciding whether a snippet recovers an annotated rationale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum MatchCriterion {
    /// Overlap must exceed half of the shorter of snippet and rationale.
    #[default]
    MinHalf,
    /// Overlap must exceed half of the longer of snippet and rationale.
    MaxHalf,
}

/// `true` iff the shared tokens exceed the criterion's half-length threshold.
pub fn is_true_rationale(snippet: TokenSpan, rationale: TokenSpan, criterion: MatchCriterion) -> bool {
    let overlap = snippet.overlap(&rationale);
    let (n, m) = (snippet.len(), rationale.len());
    let base = match criterion {
        MatchCriterion::MinHalf => n.min(m),
        MatchCriterion::MaxHalf => n.max(m),
    };
    // overlap > base / 2 without rounding
    2 * overlap > base
}

/// Successes over evaluated documents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RecallCount {
    pub numerator: usize,
    pub denominator: usize,
}

impl RecallCount {
    pub fn recall(&self) -> f64 {
        if self.denominator == 0 {
            0.0
        } else {
            self.numerator as f64 / self.denominator as f64
        }
    }
}

/// 0-based position of the first selected snippet that matches any annotation.
pub fn first_hit(selected: &[TokenSpan], annotations: &[TokenSpan], criterion: MatchCriterion) -> Option<usize> {
    selected
        .iter()
        .position(|s| annotations.iter().any(|a| is_true_rationale(*s, *a, criterion)))
}

/// A document succeeds when any of its first `k` selected snippets matches any of its spans.
///
/// `selected[i]` must be ordered best first.
pub fn rationale_recall(
    selected: &[Vec<TokenSpan>],
    annotations: &[Vec<TokenSpan>],
    k: usize,
    criterion: MatchCriterion,
) -> RecallCount {
    let numerator = selected
        .iter()
        .zip(annotations)
        .filter(|(sel, ann)| first_hit(&sel[..k.min(sel.len())], ann, criterion).is_some())
        .count();
    RecallCount {
        numerator,
        denominator: selected.len().min(annotations.len()),
    }
}

/// `|A ∩ B| / |A ∪ B|`, and 1 when both are empty.
pub fn jaccard<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> f64 {
    let union = a.union(b).count();
    if union == 0 {
        return 1.0;
    }
    a.intersection(b).count() as f64 / union as f64
}

/// Snippet ranking strategy compared by the experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Method {
    Snippet,
    Complement,
    Keyword,
    ScoreFusion,
    RankFusion,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Snippet,
        Method::Complement,
        Method::Keyword,
        Method::ScoreFusion,
        Method::RankFusion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Snippet => "snippet",
            Method::Complement => "complement",
            Method::Keyword => "keyword",
            Method::ScoreFusion => "score-fusion",
            Method::RankFusion => "rank-fusion",
        }
    }

    /// Ranking key of a snippet whose component scores and ranks are filled.
    pub fn key(self, s: &ScoredSnippet, weights: [f64; 3], rrf_k: u32) -> f64 {
        match self {
            Method::Snippet => s.snippet_score,
            Method::Complement => s.complement_score,
            Method::Keyword => s.token_score,
            Method::ScoreFusion | Method::RankFusion => {
                let mode = if self == Method::ScoreFusion {
                    FusionMode::ScoreBased
                } else {
                    FusionMode::RankBased
                };
                fuse_components(s.components(), s.ranks, &FusionConfig { weights, mode, rrf_k })
            }
        }
    }

    /// Top `k` spans by this method's key; earlier spans win ties.
    pub fn top_spans(self, scored: &[ScoredSnippet], weights: [f64; 3], rrf_k: u32, k: usize) -> Vec<TokenSpan> {
        let mut keyed: Vec<(f64, TokenSpan)> = scored.iter().map(|s| (self.key(s, weights, rrf_k), s.span())).collect();
        keyed.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.start.cmp(&b.1.start)));
        keyed.into_iter().take(k).map(|(_, s)| s).collect()
    }
}

impl core::fmt::Display for Method {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

impl core::str::FromStr for Method {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| crate::Error::InvalidConfig(alloc::format!("unknown method `{s}`")))
    }
}
