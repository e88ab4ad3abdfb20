//! Deterministic synthetic corpora with planted rationales.
//!
//! Filler documents draw tokens uniformly from a filler vocabulary. A
//! responsive document additionally carries one or more planted runs of
//! responsive-vocabulary tokens, recorded as explicit rationale spans. A
//! fraction of the responsive vocabulary also appears in the filler pool so
//! that single tokens are not perfect evidence on their own.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus_file::{CorpusRecord, FileLabel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SyntheticSpec {
    pub responsive: usize,
    pub non_responsive: usize,
    /// Inclusive range of filler tokens per document.
    pub filler_len: (usize, usize),
    /// Inclusive range of tokens per planted span.
    pub planted_len: (usize, usize),
    pub spans_per_doc: usize,
    pub filler_vocab: usize,
    pub responsive_vocab: usize,
    /// Share of the responsive vocabulary that also occurs in filler text.
    pub shared_fraction: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            responsive: 500,
            non_responsive: 500,
            filler_len: (400, 1000),
            planted_len: (30, 60),
            spans_per_doc: 1,
            filler_vocab: 2000,
            responsive_vocab: 150,
            shared_fraction: 0.1,
            seed: 0,
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
#[error("invalid synthetic spec: {0}")]
pub struct SpecError(String);

impl SyntheticSpec {
    pub fn validate(&self) -> Result<(), SpecError> {
        let bad = |m: &str| Err(SpecError(m.into()));
        if self.filler_len.0 > self.filler_len.1 {
            return bad("filler_len range is reversed");
        }
        if self.planted_len.0 == 0 || self.planted_len.0 > self.planted_len.1 {
            return bad("planted_len must be a non-empty positive range");
        }
        if self.filler_vocab == 0 || self.responsive_vocab == 0 {
            return bad("vocabularies must be non-empty");
        }
        if self.responsive > 0 && self.spans_per_doc == 0 {
            return bad("responsive documents need at least one planted span");
        }
        if !(0.0..=1.0).contains(&self.shared_fraction) {
            return bad("shared_fraction must lie in [0, 1]");
        }
        Ok(())
    }

    pub fn filler_words(&self) -> Vec<String> {
        (0..self.filler_vocab).map(|i| format!("fill{i}")).collect()
    }

    pub fn responsive_words(&self) -> Vec<String> {
        (0..self.responsive_vocab).map(|i| format!("resp{i}")).collect()
    }

    /// Responsive tokens that may also appear as filler.
    pub fn shared_words(&self) -> Vec<String> {
        let n = (self.shared_fraction * self.responsive_vocab as f64).round() as usize;
        self.responsive_words().into_iter().take(n).collect()
    }
}

/// Generates the corpus: responsive documents `r00000..`, then non-responsive `n00000..`.
pub fn synth_corpus(spec: &SyntheticSpec) -> Result<Vec<CorpusRecord>, SpecError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut filler_pool = spec.filler_words();
    filler_pool.extend(spec.shared_words());
    let planted_pool = spec.responsive_words();

    let mut out = Vec::with_capacity(spec.responsive + spec.non_responsive);
    for i in 0..spec.responsive {
        let (tokens, spans) = responsive_doc(spec, &filler_pool, &planted_pool, &mut rng);
        out.push(CorpusRecord {
            id: format!("r{i:05}"),
            text: tokens.join(" "),
            label: Some(FileLabel::Responsive),
            rationales: Vec::new(),
            rationale_spans: Some(spans),
        });
    }
    for i in 0..spec.non_responsive {
        let len = rng.gen_range(spec.filler_len.0..=spec.filler_len.1);
        let tokens = draw(&filler_pool, len, &mut rng);
        out.push(CorpusRecord {
            id: format!("n{i:05}"),
            text: tokens.join(" "),
            label: Some(FileLabel::NotResponsive),
            rationales: Vec::new(),
            rationale_spans: None,
        });
    }
    Ok(out)
}

fn draw<'a>(pool: &'a [String], len: usize, rng: &mut ChaCha8Rng) -> Vec<&'a str> {
    (0..len).map(|_| pool.choose(rng).expect("non-empty pool").as_str()).collect()
}

fn responsive_doc<'a>(
    spec: &SyntheticSpec,
    filler_pool: &'a [String],
    planted_pool: &'a [String],
    rng: &mut ChaCha8Rng,
) -> (Vec<&'a str>, Vec<[usize; 2]>) {
    let len = rng.gen_range(spec.filler_len.0..=spec.filler_len.1);
    let filler = draw(filler_pool, len, rng);
    let mut cuts: Vec<usize> = (0..spec.spans_per_doc).map(|_| rng.gen_range(0..=len)).collect();
    cuts.sort_unstable();

    let mut tokens = Vec::with_capacity(len + spec.spans_per_doc * spec.planted_len.1);
    let mut spans = Vec::with_capacity(cuts.len());
    let mut prev = 0;
    for cut in cuts {
        tokens.extend_from_slice(&filler[prev..cut]);
        let m = rng.gen_range(spec.planted_len.0..=spec.planted_len.1);
        let start = tokens.len();
        tokens.extend(draw(planted_pool, m, rng));
        spans.push([start, tokens.len()]);
        prev = cut;
    }
    tokens.extend_from_slice(&filler[prev..]);
    (tokens, spans)
}
