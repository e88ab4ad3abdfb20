use alloc::vec::Vec;

use crate::corpus::TokenSpan;
use crate::error::{Error, Result};
use crate::explain::{FusionMode, ScoredSnippet};

use super::{first_hit, MatchCriterion, Method};

/// Every `(w1, w2, w3)` with nonnegative multiples of `step` summing to one,
/// ordered by descending `w1`, then descending `w2`.
pub fn simplex_lattice(step: f64) -> Result<Vec<[f64; 3]>> {
    let divisions = libm::round(1.0 / step);
    if !(step > 0.0 && step <= 1.0) || libm::fabs(divisions * step - 1.0) > 1e-9 {
        return Err(Error::InvalidConfig(alloc::format!("grid step {step} does not divide 1")));
    }
    let d = divisions as usize;
    let mut points = Vec::with_capacity((d + 1) * (d + 2) / 2);
    for i in (0..=d).rev() {
        for j in (0..=d - i).rev() {
            let l = d - i - j;
            points.push([i as f64 / d as f64, j as f64 / d as f64, l as f64 / d as f64]);
        }
    }
    Ok(points)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GridSearchResult {
    pub weights: [f64; 3],
    pub objective: f64,
    pub evaluated: usize,
}

/// Argmax of `objective` over the candidates; the first candidate wins ties.
pub fn grid_search_over<F>(candidates: &[[f64; 3]], mut objective: F) -> Result<GridSearchResult>
where
    F: FnMut([f64; 3]) -> f64,
{
    let mut best: Option<([f64; 3], f64)> = None;
    for &w in candidates {
        let value = objective(w);
        if best.is_none_or(|(_, b)| value > b) {
            best = Some((w, value));
        }
    }
    let (weights, objective) = best.ok_or(Error::Empty("weight grid"))?;
    Ok(GridSearchResult {
        weights,
        objective,
        evaluated: candidates.len(),
    })
}

/// Searches the simplex lattice; ties prefer larger `w1`, then larger `w2`.
pub fn grid_search_weights<F>(step: f64, objective: F) -> Result<GridSearchResult>
where
    F: FnMut([f64; 3]) -> f64,
{
    grid_search_over(&simplex_lattice(step)?, objective)
}

/// A validation document: its annotations and component-scored snippets.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedDoc {
    pub annotations: Vec<TokenSpan>,
    pub snippets: Vec<ScoredSnippet>,
}

/// Recall@`k` of the fused ranking under `weights`, over prepared documents.
pub fn fusion_recall(
    docs: &[PreparedDoc],
    weights: [f64; 3],
    mode: FusionMode,
    rrf_k: u32,
    k: usize,
    criterion: MatchCriterion,
) -> f64 {
    if docs.is_empty() {
        return 0.0;
    }
    let method = match mode {
        FusionMode::ScoreBased => Method::ScoreFusion,
        FusionMode::RankBased => Method::RankFusion,
    };
    let hits = docs
        .iter()
        .filter(|d| {
            let top = method.top_spans(&d.snippets, weights, rrf_k, k);
            first_hit(&top, &d.annotations, criterion).is_some()
        })
        .count();
    hits as f64 / docs.len() as f64
}
