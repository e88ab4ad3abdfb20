//! Capped vocabularies and normalized-frequency bag-of-words vectors.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::corpus::{Document, TokenSpan};
use crate::error::{Error, Result};

/// Default vocabulary cap.
pub const DEFAULT_MAX_FEATURES: usize = 20_000;

/// Token to feature-index mapping. Indices are `0..len()` without gaps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    tokens: Vec<String>,
    index: BTreeMap<String, u32>,
    max_features: usize,
}

impl Vocabulary {
    /// Builds a vocabulary from an explicit ordered token list.
    pub fn from_tokens(tokens: Vec<String>, max_features: usize) -> Result<Self> {
        if tokens.len() > max_features {
            return Err(Error::InvalidConfig(alloc::format!(
                "{} tokens exceed the cap of {max_features}",
                tokens.len()
            )));
        }
        let mut index = BTreeMap::new();
        for (i, t) in tokens.iter().enumerate() {
            if index.insert(t.clone(), i as u32).is_some() {
                return Err(Error::InvalidConfig(alloc::format!("duplicate vocabulary token `{t}`")));
            }
        }
        Ok(Self {
            tokens,
            index,
            max_features,
        })
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn max_features(&self) -> usize {
        self.max_features
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn get(&self, token: &str) -> Option<u32> {
        self.index.get(token).copied()
    }

    pub fn token(&self, index: u32) -> Option<&str> {
        self.tokens.get(index as usize).map(String::as_str)
    }

    /// Maps each token to its feature index (`None` when out of vocabulary).
    pub fn encode(&self, tokens: &[String]) -> Vec<Option<u32>> {
        tokens.iter().map(|t| self.get(t)).collect()
    }
}

/// Ranks tokens by document frequency (ties lexicographic) and keeps the top `max_features`.
pub fn build_vocabulary<'a, I>(training_docs: I, max_features: usize) -> Result<Vocabulary>
where
    I: IntoIterator<Item = &'a [String]>,
{
    let mut df: BTreeMap<&'a str, usize> = BTreeMap::new();
    let mut n_docs = 0usize;
    for tokens in training_docs {
        n_docs += 1;
        let mut distinct: Vec<&str> = tokens.iter().map(String::as_str).collect();
        distinct.sort_unstable();
        distinct.dedup();
        for t in distinct {
            *df.entry(t).or_default() += 1;
        }
    }
    if n_docs == 0 {
        return Err(Error::Empty("training documents"));
    }
    if df.is_empty() {
        return Err(Error::Empty("token universe"));
    }
    // BTreeMap iteration is lexicographic, and the sort is stable.
    let mut ranked: Vec<(&str, usize)> = df.into_iter().collect();
    ranked.sort_by_key(|r| core::cmp::Reverse(r.1));
    ranked.truncate(max_features);
    Vocabulary::from_tokens(ranked.into_iter().map(|(t, _)| t.to_string()).collect(), max_features)
}

/// Sparse normalized term frequencies.
///
/// Each stored value is `count(token) / source_token_count`, where the
/// denominator counts out-of-vocabulary tokens too.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FeatureVector {
    entries: Vec<(u32, f64)>,
    source_token_count: usize,
}

impl FeatureVector {
    /// Vector over already-encoded tokens.
    pub fn from_encoded<I>(ids: I) -> Self
    where
        I: IntoIterator<Item = Option<u32>>,
    {
        let mut total = 0usize;
        let mut present: Vec<u32> = Vec::new();
        for id in ids {
            total += 1;
            if let Some(id) = id {
                present.push(id);
            }
        }
        present.sort_unstable();
        let mut entries: Vec<(u32, f64)> = Vec::new();
        let mut i = 0;
        while i < present.len() {
            let id = present[i];
            let mut j = i;
            while j < present.len() && present[j] == id {
                j += 1;
            }
            entries.push((id, (j - i) as f64 / total as f64));
            i = j;
        }
        Self {
            entries,
            source_token_count: total,
        }
    }

    /// Vector over `ids` with the positions in `removed` skipped.
    pub fn from_encoded_without(ids: &[Option<u32>], removed: TokenSpan) -> Self {
        let head = &ids[..removed.start.min(ids.len())];
        let tail = &ids[removed.end.min(ids.len())..];
        Self::from_encoded(head.iter().chain(tail).copied())
    }

    /// `(feature index, value)` pairs in ascending index order.
    pub fn entries(&self) -> &[(u32, f64)] {
        &self.entries
    }

    pub fn source_token_count(&self) -> usize {
        self.source_token_count
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn value(&self, index: u32) -> f64 {
        self.entries
            .binary_search_by_key(&index, |e| e.0)
            .map(|i| self.entries[i].1)
            .unwrap_or(0.0)
    }

    /// Inner product with a dense weight vector.
    pub fn dot(&self, weights: &[f64]) -> f64 {
        self.entries.iter().map(|&(i, v)| weights[i as usize] * v).sum()
    }
}

pub fn vectorize(tokens: &[String], vocab: &Vocabulary) -> FeatureVector {
    FeatureVector::from_encoded(tokens.iter().map(|t| vocab.get(t)))
}

/// Vector of `doc` with the tokens in `removed` deleted, renormalized over what remains.
pub fn vectorize_complement(doc: &Document, removed: TokenSpan, vocab: &Vocabulary) -> Result<FeatureVector> {
    if removed.start >= removed.end || removed.end > doc.len() {
        return Err(Error::InvalidSpan {
            start: removed.start,
            end: removed.end,
        });
    }
    Ok(FeatureVector::from_encoded_without(&vocab.encode(doc.tokens()), removed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn toks(words: &[&str]) -> Vec<String> {
        words.iter().map(|w| w.to_string()).collect()
    }

    fn vocab(words: &[&str]) -> Vocabulary {
        Vocabulary::from_tokens(toks(words), 100).unwrap()
    }

    #[test]
    fn vocabulary_ranking_and_ties() {
        let docs = [toks(&["a", "b"]), toks(&["a", "c"])];
        let v = build_vocabulary(docs.iter().map(|d| d.as_slice()), 2).unwrap();
        assert_eq!(v.tokens(), &toks(&["a", "b"])[..]);
        let v3 = build_vocabulary(docs.iter().map(|d| d.as_slice()), 10).unwrap();
        assert_eq!(v3.len(), 3);
        assert_eq!(v3, build_vocabulary(docs.iter().map(|d| d.as_slice()), 10).unwrap());
    }

    #[test]
    fn vocabulary_counts_documents_not_occurrences() {
        let docs = [toks(&["z", "z", "z"]), toks(&["y"]), toks(&["y"])];
        let v = build_vocabulary(docs.iter().map(|d| d.as_slice()), 10).unwrap();
        assert_eq!(v.tokens(), &toks(&["y", "z"])[..]);
    }

    #[test]
    fn vocabulary_errors() {
        let none: [Vec<String>; 0] = [];
        assert!(build_vocabulary(none.iter().map(|d| d.as_slice()), 5).is_err());
        let empty = [Vec::<String>::new()];
        assert_eq!(
            build_vocabulary(empty.iter().map(|d| d.as_slice()), 5),
            Err(Error::Empty("token universe"))
        );
        assert!(Vocabulary::from_tokens(toks(&["a", "a"]), 5).is_err());
    }

    #[test]
    fn vectorize_examples() {
        let v = vectorize(&toks(&["a", "b", "a", "c"]), &vocab(&["a", "b"]));
        assert_eq!(v.entries(), &[(0, 0.5), (1, 0.25)]);
        let e = vectorize(&[], &vocab(&["a"]));
        assert!(e.is_empty());
        assert_eq!(e.source_token_count(), 0);
        let oov = vectorize(&toks(&["z", "z"]), &vocab(&["a"]));
        assert!(oov.is_empty());
        assert_eq!(oov.source_token_count(), 2);
    }

    #[test]
    fn complement_examples() {
        let d = Document::new("d", "a b a c", crate::Label::Unlabeled, vec![]).unwrap();
        let vb = vocab(&["a", "b"]);
        let c = vectorize_complement(&d, TokenSpan::new(0, 2).unwrap(), &vb).unwrap();
        assert_eq!(c.entries(), &[(0, 0.5)]);
        let all = vectorize_complement(&d, TokenSpan::new(0, 4).unwrap(), &vb).unwrap();
        assert!(all.is_empty());
        assert!(vectorize_complement(&d, TokenSpan { start: 2, end: 5 }, &vb).is_err());
    }

    #[test]
    fn complement_of_oov_span_only_renormalizes() {
        // 6 tokens: a a b x y c with vocab {a, b}; removing [3,5) = "x y" (OOV)
        let d = Document::new("d", "a a b x y c", crate::Label::Unlabeled, vec![]).unwrap();
        let vb = vocab(&["a", "b"]);
        let full = vectorize(d.tokens(), &vb);
        assert_eq!(full.entries(), &[(0, 2.0 / 6.0), (1, 1.0 / 6.0)]);
        let c = vectorize_complement(&d, TokenSpan::new(3, 5).unwrap(), &vb).unwrap();
        // hand computed: counts unchanged, denominator 4
        assert_eq!(c.entries(), &[(0, 0.5), (1, 0.25)]);
        assert_eq!(c.source_token_count(), 4);
    }

    proptest! {
        #[test]
        fn mass_sums_to_one(words in proptest::collection::vec("[a-f]", 1..60)) {
            let vb = vocab(&["a", "b", "c"]);
            let v = vectorize(&words, &vb);
            let oov = words.iter().filter(|w| vb.get(w).is_none()).count() as f64;
            let total: f64 = v.entries().iter().map(|e| e.1).sum::<f64>() + oov / words.len() as f64;
            prop_assert!((total - 1.0).abs() < 1e-12);
            prop_assert!(v.entries().iter().all(|e| e.1 > 0.0 && e.1 <= 1.0));
        }

        #[test]
        fn permutation_invariant(mut words in proptest::collection::vec("[a-f]", 0..60), seed in any::<u64>()) {
            use rand::{seq::SliceRandom, SeedableRng};
            let vb = vocab(&["a", "b", "c", "d"]);
            let before = vectorize(&words, &vb);
            words.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            prop_assert_eq!(before, vectorize(&words, &vb));
        }

        #[test]
        fn complement_equals_deletion(words in proptest::collection::vec("[a-f]", 1..60), s in 0usize..60, l in 1usize..30) {
            let text = words.join(" ");
            let d = Document::new("d", text, crate::Label::Unlabeled, vec![]).unwrap();
            let s = s % words.len();
            let e = (s + l).min(words.len());
            let vb = vocab(&["a", "c", "e"]);
            let mut kept = words.clone();
            kept.drain(s..e);
            let span = TokenSpan::new(s, e).unwrap();
            prop_assert_eq!(vectorize_complement(&d, span, &vb).unwrap(), vectorize(&kept, &vb));
        }
    }
}
