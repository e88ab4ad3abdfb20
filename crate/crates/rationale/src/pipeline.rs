//! Parallel drivers over the core algorithms.
//!
//! Work is split per fold or per document and collected in input order, so
//! results do not depend on the number of worker threads.

use rayon::prelude::*;
use rayon::ThreadPool;

use rationale_core::eval::{fold_assignment, run_fold, summarize};
use rationale_core::{
    build_vocabulary, explain_document, train, vectorize, Corpus, Document, Error,
    ExperimentConfig, ExperimentResult, ExplainConfig, ExplanationReport, FilteredCorpus,
    KeywordLexicon, LinearModel, Result, TrainConfig, TrainReport,
};

/// A pool with `workers` threads, or rayon's default when `None`.
pub fn thread_pool(workers: Option<usize>) -> std::result::Result<ThreadPool, rayon::ThreadPoolBuildError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
}

/// Trains on every labeled document of `corpus`.
pub fn train_corpus(corpus: &Corpus, vocab_cap: usize, config: &TrainConfig) -> Result<(LinearModel, TrainReport)> {
    let labeled: Vec<&Document> = corpus.documents().iter().filter(|d| d.label().is_labeled()).collect();
    if labeled.is_empty() {
        return Err(Error::Empty("labeled documents"));
    }
    let vocab = build_vocabulary(labeled.iter().map(|d| d.tokens()), vocab_cap)?;
    let vectors: Vec<_> = labeled.iter().map(|d| vectorize(d.tokens(), &vocab)).collect();
    let labels: Vec<_> = labeled.iter().map(|d| d.label()).collect();
    train(&vectors, &labels, vocab, config)
}

pub fn run_experiment(pool: &ThreadPool, corpus: &FilteredCorpus, config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let folds = fold_assignment(corpus, config)?;
    let outcomes = pool.install(|| {
        (0..config.folds)
            .into_par_iter()
            .map(|f| run_fold(corpus, &folds, f, config))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(summarize(config, outcomes))
}

pub fn explain_all(
    pool: &ThreadPool,
    model: &LinearModel,
    docs: &[&Document],
    lexicon: &KeywordLexicon,
    config: &ExplainConfig,
) -> Result<Vec<ExplanationReport>> {
    config.fusion.validate()?;
    pool.install(|| {
        docs.par_iter()
            .map(|d| explain_document(model, d, lexicon, config))
            .collect()
    })
}
