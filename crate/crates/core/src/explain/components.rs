//! The three per-snippet scorers and the keyword lexicon they share.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::corpus::{Document, TokenSpan};
use crate::error::{Error, Result};
use crate::features::FeatureVector;
use crate::math::logistic;
use crate::model::LinearModel;

use super::Snippet;

/// Default lexicon size.
pub const DEFAULT_TOP_KEYWORDS: usize = 100;

/// Scores the snippet's tokens as if they were a whole document.
pub fn snippet_score(model: &LinearModel, snippet_tokens: &[String]) -> f64 {
    model.score_tokens(snippet_tokens)
}

/// Normalized score drop: `0` if removal raised the score, else `(DS(d) − DS(d−s)) / DS(d)`.
pub fn complement_from_scores(doc_score: f64, without_score: f64) -> f64 {
    if doc_score < without_score {
        0.0
    } else {
        1.0 - without_score / doc_score
    }
}

/// Complement score of `snippet` within `doc`.
///
/// Removing the whole document leaves an empty vector, scored as `logistic(bias)`.
pub fn complement_score(model: &LinearModel, doc: &Document, snippet: &Snippet) -> Result<f64> {
    let span = snippet.span;
    if span.start >= span.end || span.end > doc.len() {
        return Err(Error::InvalidSpan {
            start: span.start,
            end: span.end,
        });
    }
    let ids = model.vocab().encode(doc.tokens());
    let ds = model.score(&FeatureVector::from_encoded(ids.iter().copied()));
    let rest = model.score(&FeatureVector::from_encoded_without(&ids, span));
    Ok(complement_from_scores(ds, rest))
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LexiconEntry {
    pub token: String,
    pub index: u32,
    pub weight: f64,
}

/// The highest positive-weight tokens of a model.
#[derive(Debug, Clone, PartialEq)]
pub struct KeywordLexicon {
    entries: Vec<LexiconEntry>,
    by_index: BTreeMap<u32, f64>,
    top_n: usize,
    min_weight: f64,
}

impl KeywordLexicon {
    /// Entries by descending weight.
    pub fn entries(&self) -> &[LexiconEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn top_n(&self) -> usize {
        self.top_n
    }

    pub fn min_weight(&self) -> f64 {
        self.min_weight
    }

    pub fn weight_of(&self, index: u32) -> Option<f64> {
        self.by_index.get(&index).copied()
    }

    pub fn weight(&self, token: &str) -> Option<f64> {
        self.entries.iter().find(|e| e.token == token).map(|e| e.weight)
    }
}

/// Tokens with weight above `min_weight` (and above zero), heaviest first, at most `top_n`.
pub fn build_keyword_lexicon(model: &LinearModel, top_n: usize, min_weight: f64) -> KeywordLexicon {
    let floor = min_weight.max(0.0);
    let mut entries: Vec<LexiconEntry> = model
        .weights()
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > floor)
        .map(|(i, &w)| LexiconEntry {
            token: model.vocab().token(i as u32).unwrap_or_default().into(),
            index: i as u32,
            weight: w,
        })
        .collect();
    entries.sort_by(|a, b| b.weight.total_cmp(&a.weight).then_with(|| a.token.cmp(&b.token)));
    entries.truncate(top_n);
    let by_index = entries.iter().map(|e| (e.index, e.weight)).collect();
    KeywordLexicon {
        entries,
        by_index,
        top_n,
        min_weight,
    }
}

/// `weight(t) × value(t)` with the document-level normalized frequency.
pub fn cscore(token: &str, lexicon: &KeywordLexicon, doc_vector: &FeatureVector) -> f64 {
    match lexicon.entries.iter().find(|e| e.token == token) {
        Some(e) => e.weight * doc_vector.value(e.index),
        None => 0.0,
    }
}

/// Per-document keyword contributions, keyed by feature index.
#[derive(Debug, Clone, PartialEq, Default)]
pub(crate) struct Contributions {
    by_index: BTreeMap<u32, f64>,
    total: f64,
}

impl Contributions {
    pub(crate) fn new(lexicon: &KeywordLexicon, doc_vector: &FeatureVector) -> Self {
        let by_index: BTreeMap<u32, f64> = doc_vector
            .entries()
            .iter()
            .filter_map(|&(i, v)| lexicon.weight_of(i).map(|w| (i, w * v)))
            .collect();
        let total = by_index.values().sum();
        Self { by_index, total }
    }

    pub(crate) fn get(&self, index: u32) -> f64 {
        self.by_index.get(&index).copied().unwrap_or(0.0)
    }

    /// Share of the total contributed by distinct lexicon tokens in `ids[span]`.
    pub(crate) fn share(&self, ids: &[Option<u32>], span: TokenSpan) -> f64 {
        if self.total <= 0.0 {
            return 0.0;
        }
        let mut hit: Vec<u32> = ids[span.start..span.end]
            .iter()
            .filter_map(|id| id.filter(|i| self.by_index.contains_key(i)))
            .collect();
        hit.sort_unstable();
        hit.dedup();
        let covered: f64 = hit.iter().map(|&i| self.get(i)).sum();
        covered / self.total
    }
}

/// Fraction of the document's keyword contribution carried by tokens inside the snippet.
///
/// Each lexicon token found anywhere in the snippet counts with its full
/// document-level CScore, once. Zero when the document has no lexicon token.
pub fn snippet_token_score(model: &LinearModel, snippet: &Snippet, doc: &Document, lexicon: &KeywordLexicon) -> f64 {
    let ids = model.vocab().encode(doc.tokens());
    let doc_vector = FeatureVector::from_encoded(ids.iter().copied());
    let span = TokenSpan {
        start: snippet.span.start.min(ids.len()),
        end: snippet.span.end.min(ids.len()),
    };
    Contributions::new(lexicon, &doc_vector).share(&ids, span)
}

/// Score of an empty vector.
pub(crate) fn empty_score(model: &LinearModel) -> f64 {
    logistic(model.bias())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Label;
    use crate::features::{vectorize, Vocabulary};
    use crate::model::TrainConfig;
    use alloc::string::ToString;
    use alloc::vec;

    fn model(tokens: &[&str], weights: &[f64], bias: f64) -> LinearModel {
        let vocab = Vocabulary::from_tokens(tokens.iter().map(|t| t.to_string()).collect(), 100).unwrap();
        LinearModel::from_parts(vocab, weights.to_vec(), bias, TrainConfig::default()).unwrap()
    }

    fn doc(text: &str) -> Document {
        Document::new("d", text, Label::Unlabeled, vec![]).unwrap()
    }

    fn snip(start: usize, end: usize) -> Snippet {
        Snippet {
            span: TokenSpan { start, end },
            size: end - start,
        }
    }

    #[test]
    fn complement_formula() {
        assert_eq!(complement_from_scores(0.8, 0.2), 0.75);
        assert_eq!(complement_from_scores(0.4, 0.9), 0.0);
        assert!((complement_from_scores(0.3482, 0.0292) - 0.9161).abs() < 1e-4);
        assert_eq!(complement_from_scores(0.5, 0.5), 0.0);
    }

    #[test]
    fn snippet_score_cases() {
        let zero = model(&["a"], &[0.0], 0.0);
        assert_eq!(snippet_score(&zero, &["a".to_string()]), 0.5);
        let m = model(&["a"], &[2.0], -0.7);
        assert_eq!(snippet_score(&m, &["q".to_string(), "r".to_string()]), logistic(-0.7));
    }

    #[test]
    fn complement_full_removal_uses_bias() {
        let m = model(&["a"], &[4.0], -1.0);
        let d = doc("a a");
        let c = complement_score(&m, &d, &snip(0, 2)).unwrap();
        let ds = m.score_tokens(d.tokens());
        assert_eq!(c, 1.0 - logistic(-1.0) / ds);
        assert!(complement_score(&m, &d, &snip(1, 3)).is_err());
    }

    #[test]
    fn lexicon_ranking() {
        let m = model(&["a", "b", "c"], &[3.0, 1.0, -2.0], 0.0);
        let lex = build_keyword_lexicon(&m, 2, 0.0);
        let got: Vec<(&str, f64)> = lex.entries().iter().map(|e| (e.token.as_str(), e.weight)).collect();
        assert_eq!(got, vec![("a", 3.0), ("b", 1.0)]);
        let neg = model(&["a", "b"], &[-1.0, -0.5], 0.0);
        assert!(build_keyword_lexicon(&neg, 5, 0.0).is_empty());
        let tie = model(&["b", "a"], &[1.0, 1.0], 0.0);
        assert_eq!(build_keyword_lexicon(&tie, 1, 0.0).entries()[0].token, "a");
        assert_eq!(build_keyword_lexicon(&m, 5, 1.5).len(), 1);
    }

    #[test]
    fn lexicon_on_large_model_is_half_percent() {
        let tokens: Vec<String> = (0..20_000).map(|i| alloc::format!("t{i}")).collect();
        let weights: Vec<f64> = (0..20_000).map(|i| if i % 2 == 0 { 1.0 + i as f64 } else { -1.0 }).collect();
        let vocab = Vocabulary::from_tokens(tokens, 20_000).unwrap();
        let m = LinearModel::from_parts(vocab, weights, 0.0, TrainConfig::default()).unwrap();
        let lex = build_keyword_lexicon(&m, DEFAULT_TOP_KEYWORDS, 0.0);
        assert_eq!(lex.len(), 100);
        assert_eq!(lex.len() as f64 / m.vocab().len() as f64, 0.005);
    }

    #[test]
    fn cscore_cases() {
        let m = model(&["a", "b", "c"], &[3.0, 1.0, -2.0], 0.0);
        let lex = build_keyword_lexicon(&m, 2, 0.0);
        let toks: Vec<String> = ["a", "x", "x", "x"].iter().map(|t| t.to_string()).collect();
        let v = vectorize(&toks, m.vocab());
        assert_eq!(cscore("a", &lex, &v), 0.75);
        assert_eq!(cscore("c", &lex, &v), 0.0);
        assert_eq!(cscore("b", &lex, &v), 0.0);
    }

    #[test]
    fn token_score_cases() {
        // contributions a: 3 * 1/4 = 0.75, b: 1 * 1/4 = 0.25
        let m = model(&["a", "b"], &[3.0, 1.0], 0.0);
        let lex = build_keyword_lexicon(&m, 10, 0.0);
        let d = doc("a x b x");
        assert_eq!(snippet_token_score(&m, &snip(0, 2), &d, &lex), 0.75);
        assert_eq!(snippet_token_score(&m, &snip(0, 3), &d, &lex), 1.0);
        assert_eq!(snippet_token_score(&m, &snip(0, 4), &d, &lex), 1.0);
        assert_eq!(snippet_token_score(&m, &snip(1, 2), &d, &lex), 0.0);
        assert_eq!(snippet_token_score(&m, &snip(0, 2), &doc("x y z"), &lex), 0.0);
    }

    #[test]
    fn token_score_counts_repeated_token_once() {
        let m = model(&["a", "b"], &[1.0, 1.0], 0.0);
        let lex = build_keyword_lexicon(&m, 10, 0.0);
        // a: 2/6, b: 1/6 -> snippet [0,2) = "a a" covers a only -> (2/6)/(3/6)
        let d = doc("a a x b x x");
        let s = snippet_token_score(&m, &snip(0, 2), &d, &lex);
        assert!((s - 2.0 / 3.0).abs() < 1e-12);
    }
}
