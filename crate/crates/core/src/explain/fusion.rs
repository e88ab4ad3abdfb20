//! Score-based and reciprocal-rank fusion of the component scores.

use alloc::vec::Vec;

use crate::error::{Error, Result};

use super::ScoredSnippet;

pub const DEFAULT_RRF_K: u32 = 60;
pub const DEFAULT_WEIGHTS: [f64; 3] = [0.7, 0.2, 0.1];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum FusionMode {
    ScoreBased,
    RankBased,
}

/// Weights for (snippet, complement, token) scores and the fusion mode.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FusionConfig {
    pub weights: [f64; 3],
    pub mode: FusionMode,
    pub rrf_k: u32,
}

impl Default for FusionConfig {
    fn default() -> Self {
        Self {
            weights: DEFAULT_WEIGHTS,
            mode: FusionMode::ScoreBased,
            rrf_k: DEFAULT_RRF_K,
        }
    }
}

impl FusionConfig {
    pub fn new(weights: [f64; 3], mode: FusionMode, rrf_k: u32) -> Result<Self> {
        let cfg = Self { weights, mode, rrf_k };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidConfig("fusion weights must be finite and >= 0".into()));
        }
        if self.weights.iter().all(|w| *w == 0.0) {
            return Err(Error::InvalidConfig("at least one fusion weight must be positive".into()));
        }
        Ok(())
    }
}

/// `1 / (k + rank)`.
pub fn rrf_score(rank: usize, k: u32) -> f64 {
    debug_assert!(rank >= 1);
    1.0 / (k as f64 + rank as f64)
}

/// Dense 1-based ranks by descending value; ties go to the earlier position.
pub fn rank_descending(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    let mut ranks = alloc::vec![0; values.len()];
    for (pos, idx) in order.into_iter().enumerate() {
        ranks[idx] = pos + 1;
    }
    ranks
}

/// Fused score of one snippet whose component scores and ranks are filled in.
pub fn fuse(scored: &ScoredSnippet, config: &FusionConfig) -> f64 {
    fuse_components(scored.components(), scored.ranks, config)
}

pub fn fuse_components(scores: [f64; 3], ranks: [usize; 3], config: &FusionConfig) -> f64 {
    let [w1, w2, w3] = config.weights;
    match config.mode {
        FusionMode::ScoreBased => w1 * scores[0] + w2 * scores[1] + w3 * scores[2],
        FusionMode::RankBased => {
            let k = config.rrf_k;
            w1 * rrf_score(ranks[0], k) + w2 * rrf_score(ranks[1], k) + w3 * rrf_score(ranks[2], k)
        }
    }
}

/// Fills per-component ranks (within the given list) and fused scores.
pub fn apply_fusion(scored: &mut [ScoredSnippet], config: &FusionConfig) {
    assign_ranks(scored);
    for s in scored.iter_mut() {
        s.fused_score = fuse(s, config);
    }
}

/// Ranks each component within the list. Entries must be in span-start order.
pub fn assign_ranks(scored: &mut [ScoredSnippet]) {
    let per_component: Vec<Vec<usize>> = (0..3)
        .map(|c| {
            let values: Vec<f64> = scored.iter().map(|s| s.components()[c]).collect();
            rank_descending(&values)
        })
        .collect();
    for (i, s) in scored.iter_mut().enumerate() {
        s.ranks = [per_component[0][i], per_component[1][i], per_component[2][i]];
    }
}
