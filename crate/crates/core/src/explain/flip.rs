use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::corpus::Document;
use crate::features::FeatureVector;
use crate::model::LinearModel;

/// Classification threshold used by the flip search.
pub const FLIP_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FlipOutcome {
    /// Tokens in selection order; deleting all of them drops the score below 0.5.
    Flipped(Vec<String>),
    /// Deleting every positive-weight token still leaves the document responsive.
    NotFlippable,
    /// The document already scores below 0.5.
    NotResponsive,
}

impl FlipOutcome {
    pub fn tokens(&self) -> Option<&[String]> {
        match self {
            FlipOutcome::Flipped(t) => Some(t),
            _ => None,
        }
    }
}

/// Greedily deletes the positive-weight token with the largest contribution
/// (all of its occurrences) until the document stops being responsive.
pub fn minimal_flip_set(model: &LinearModel, doc: &Document) -> FlipOutcome {
    let ids = model.vocab().encode(doc.tokens());
    let full = FeatureVector::from_encoded(ids.iter().copied());
    if model.score(&full) < FLIP_THRESHOLD {
        return FlipOutcome::NotResponsive;
    }
    let weights = model.weights();
    // cscore ordering is unchanged by renormalization, so rank once.
    let mut candidates: Vec<(u32, f64, &str)> = full
        .entries()
        .iter()
        .filter(|&&(i, _)| weights[i as usize] > 0.0)
        .map(|&(i, v)| (i, weights[i as usize] * v, model.vocab().token(i).unwrap_or_default()))
        .collect();
    candidates.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.2.cmp(b.2)));

    let mut removed = BTreeSet::new();
    let mut picked = Vec::new();
    for (index, _, token) in candidates {
        removed.insert(index);
        picked.push(String::from(token));
        let rest = FeatureVector::from_encoded(
            ids.iter()
                .copied()
                .filter(|id| !id.is_some_and(|i| removed.contains(&i))),
        );
        if model.score(&rest) < FLIP_THRESHOLD {
            return FlipOutcome::Flipped(picked);
        }
    }
    FlipOutcome::NotFlippable
}

/// Tokens of `doc` with every occurrence of `removed` deleted.
pub fn delete_tokens(tokens: &[String], removed: &[String]) -> Vec<String> {
    tokens.iter().filter(|t| !removed.contains(t)).cloned().collect()
}
