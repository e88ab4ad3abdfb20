//! Five-method rationale recall under k-fold cross-validation.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::corpus::{make_folds, FilteredCorpus, FoldAssignment, Label, TokenSpan};
use crate::error::{Error, Result};
use crate::explain::{build_keyword_lexicon, DocumentScorer, FusionMode, DEFAULT_RRF_K, DEFAULT_TOP_KEYWORDS, DEFAULT_WEIGHTS};
use crate::features::{build_vocabulary, vectorize, DEFAULT_MAX_FEATURES};
use crate::model::{select_cutoff, train, LinearModel, TrainConfig, TrainReport};

use super::grid::{fusion_recall, grid_search_weights, PreparedDoc};
use super::{first_hit, jaccard, MatchCriterion, Method};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GridSearchConfig {
    pub step: f64,
    /// The objective is recall at this `K` on the training fold's annotated documents.
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExperimentConfig {
    pub snippet_sizes: Vec<usize>,
    pub max_k: usize,
    pub fusion_weights: [f64; 3],
    pub rrf_k: u32,
    pub criterion: MatchCriterion,
    pub target_recall: f64,
    pub folds: usize,
    pub seed: u64,
    pub keyword_top_n: usize,
    pub keyword_min_weight: f64,
    pub vocab_cap: usize,
    pub train: TrainConfig,
    /// When set, fusion weights are tuned per fold and snippet size.
    pub grid_search: Option<GridSearchConfig>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            snippet_sizes: vec![50, 100, 200],
            max_k: 5,
            fusion_weights: DEFAULT_WEIGHTS,
            rrf_k: DEFAULT_RRF_K,
            criterion: MatchCriterion::MinHalf,
            target_recall: 0.75,
            folds: 5,
            seed: 0,
            keyword_top_n: DEFAULT_TOP_KEYWORDS,
            keyword_min_weight: 0.0,
            vocab_cap: DEFAULT_MAX_FEATURES,
            train: TrainConfig::default(),
            grid_search: None,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.snippet_sizes.is_empty() || self.snippet_sizes.iter().any(|&n| n < 2 || n % 2 != 0) {
            return Err(Error::InvalidConfig("snippet sizes must be even and >= 2".into()));
        }
        if self.max_k == 0 {
            return Err(Error::InvalidConfig("max_k must be at least 1".into()));
        }
        crate::explain::FusionConfig {
            weights: self.fusion_weights,
            mode: FusionMode::ScoreBased,
            rrf_k: self.rrf_k,
        }
        .validate()?;
        if !(self.target_recall > 0.0 && self.target_recall <= 1.0) {
            return Err(Error::InvalidConfig("target recall must lie in (0, 1]".into()));
        }
        if self.vocab_cap == 0 {
            return Err(Error::InvalidConfig("vocabulary cap must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Population {
    /// Annotated documents scoring at or above the fold's cutoff.
    Cutoff,
    /// Every annotated responsive document.
    All,
}

impl Population {
    pub const BOTH: [Population; 2] = [Population::Cutoff, Population::All];

    pub fn name(self) -> &'static str {
        match self {
            Population::Cutoff => "cutoff",
            Population::All => "all",
        }
    }
}

/// Fusion weights actually used for one snippet size in one fold.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SelectedWeights {
    pub snippet_size: usize,
    pub score_fusion: [f64; 3],
    pub rank_fusion: [f64; 3],
}

/// Per-document result of one fold.
#[derive(Debug, Clone, PartialEq)]
pub struct DocOutcome {
    pub id: String,
    pub doc_score: f64,
    pub above_cutoff: bool,
    /// `first_hit[size][method]`: 0-based position of the first matching snippet among the top `max_k`.
    pub first_hit: Vec<[Option<usize>; 5]>,
}

#[derive(Debug, Clone)]
pub struct FoldOutcome {
    pub fold: usize,
    pub model: LinearModel,
    pub train_report: TrainReport,
    pub cutoff: f64,
    pub accuracy: f64,
    pub held_out: usize,
    pub weights: Vec<SelectedWeights>,
    pub docs: Vec<DocOutcome>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RecallCell {
    pub n: usize,
    pub k: usize,
    pub method: Method,
    pub population: Population,
    /// Mean of per-fold recall.
    pub recall: f64,
    pub numerator: usize,
    pub denominator: usize,
    /// Successes over every annotated document, regardless of the cutoff.
    pub recall_over_annotated: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct JaccardCell {
    pub n: usize,
    pub k: usize,
    pub method_a: Method,
    pub method_b: Method,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FoldSummary {
    pub fold: usize,
    pub cutoff: f64,
    pub accuracy: f64,
    pub held_out: usize,
    pub train: TrainReport,
    pub weights: Vec<SelectedWeights>,
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub recall: Vec<RecallCell>,
    pub jaccard: Vec<JaccardCell>,
    pub folds: Vec<FoldSummary>,
    pub models: Vec<LinearModel>,
}

impl ExperimentResult {
    pub fn cell(&self, n: usize, k: usize, method: Method, population: Population) -> Option<&RecallCell> {
        self.recall
            .iter()
            .find(|c| c.n == n && c.k == k && c.method == method && c.population == population)
    }

    pub fn cutoffs(&self) -> Vec<f64> {
        self.folds.iter().map(|f| f.cutoff).collect()
    }

    pub fn mean_accuracy(&self) -> f64 {
        self.folds.iter().map(|f| f.accuracy).sum::<f64>() / self.folds.len().max(1) as f64
    }
}

fn prepare(
    scorer: &DocumentScorer<'_>,
    n: usize,
    annotations: &[TokenSpan],
) -> Result<PreparedDoc> {
    Ok(PreparedDoc {
        annotations: annotations.to_vec(),
        snippets: scorer.components(n)?,
    })
}

/// Trains on every fold but `fold` and evaluates rationale detection on `fold`.
pub fn run_fold(
    corpus: &FilteredCorpus,
    folds: &FoldAssignment,
    fold: usize,
    config: &ExperimentConfig,
) -> Result<FoldOutcome> {
    config.validate()?;
    let docs = corpus.corpus.documents();
    let labeled = docs.iter().filter(|d| d.label().is_labeled());
    let (test, train_docs): (Vec<_>, Vec<_>) = labeled.partition(|d| folds.fold_of(d.id()) == Some(fold));
    if test.is_empty() || train_docs.is_empty() {
        return Err(Error::Empty("fold"));
    }

    let vocab = build_vocabulary(train_docs.iter().map(|d| d.tokens()), config.vocab_cap)?;
    let vectors: Vec<_> = train_docs.iter().map(|d| vectorize(d.tokens(), &vocab)).collect();
    let labels: Vec<Label> = train_docs.iter().map(|d| d.label()).collect();
    let (model, train_report) = train(&vectors, &labels, vocab, &config.train)?;
    let lexicon = build_keyword_lexicon(&model, config.keyword_top_n, config.keyword_min_weight);

    let mut correct = 0usize;
    let mut responsive_scores = Vec::new();
    let mut scored_test = Vec::with_capacity(test.len());
    for d in &test {
        let scorer = DocumentScorer::new(&model, d.tokens(), &lexicon);
        let ds = scorer.doc_score();
        let positive = d.label() == Label::Responsive;
        if (ds >= 0.5) == positive {
            correct += 1;
        }
        if positive {
            responsive_scores.push(ds);
        }
        scored_test.push((d, scorer));
    }
    let cutoff = select_cutoff(&responsive_scores, config.target_recall)?;

    let mut weights = Vec::with_capacity(config.snippet_sizes.len());
    for &n in &config.snippet_sizes {
        let (score_fusion, rank_fusion) = match config.grid_search {
            None => (config.fusion_weights, config.fusion_weights),
            Some(grid) => {
                let prepared = train_docs
                    .iter()
                    .filter(|d| corpus.is_annotated(d.id()))
                    .map(|d| prepare(&DocumentScorer::new(&model, d.tokens(), &lexicon), n, d.rationale_spans()))
                    .collect::<Result<Vec<_>>>()?;
                let search = |mode| {
                    grid_search_weights(grid.step, |w| {
                        fusion_recall(&prepared, w, mode, config.rrf_k, grid.k, config.criterion)
                    })
                    .map(|r| r.weights)
                };
                (search(FusionMode::ScoreBased)?, search(FusionMode::RankBased)?)
            }
        };
        weights.push(SelectedWeights {
            snippet_size: n,
            score_fusion,
            rank_fusion,
        });
    }

    let mut outcomes = Vec::new();
    for (d, scorer) in &scored_test {
        if !corpus.is_annotated(d.id()) {
            continue;
        }
        let mut first = Vec::with_capacity(config.snippet_sizes.len());
        for w in &weights {
            let comps = scorer.components(w.snippet_size)?;
            let mut row = [None; 5];
            for (slot, method) in row.iter_mut().zip(Method::ALL) {
                let fusion = if method == Method::RankFusion { w.rank_fusion } else { w.score_fusion };
                let top = method.top_spans(&comps, fusion, config.rrf_k, config.max_k);
                *slot = first_hit(&top, d.rationale_spans(), config.criterion);
            }
            first.push(row);
        }
        outcomes.push(DocOutcome {
            id: d.id().into(),
            doc_score: scorer.doc_score(),
            above_cutoff: scorer.doc_score() >= cutoff,
            first_hit: first,
        });
    }

    Ok(FoldOutcome {
        fold,
        held_out: test.len(),
        accuracy: correct as f64 / test.len() as f64,
        model,
        train_report,
        cutoff,
        weights,
        docs: outcomes,
    })
}

/// Combines fold outcomes (ordered by fold index) into recall and Jaccard tables.
pub fn summarize(config: &ExperimentConfig, mut outcomes: Vec<FoldOutcome>) -> ExperimentResult {
    outcomes.sort_by_key(|o| o.fold);
    let mut recall = Vec::new();
    let mut jaccard_cells = Vec::new();
    for (si, &n) in config.snippet_sizes.iter().enumerate() {
        for k in 1..=config.max_k {
            for (mi, &method) in Method::ALL.iter().enumerate() {
                for population in Population::BOTH {
                    let mut per_fold = Vec::new();
                    let (mut num, mut den, mut annotated) = (0, 0, 0);
                    for o in &outcomes {
                        let members = o
                            .docs
                            .iter()
                            .filter(|d| population == Population::All || d.above_cutoff);
                        let (mut f_num, mut f_den) = (0, 0);
                        for d in members {
                            f_den += 1;
                            if d.first_hit[si][mi].is_some_and(|p| p < k) {
                                f_num += 1;
                            }
                        }
                        if f_den > 0 {
                            per_fold.push(f_num as f64 / f_den as f64);
                        }
                        num += f_num;
                        den += f_den;
                        annotated += o.docs.len();
                    }
                    let mean = if per_fold.is_empty() {
                        0.0
                    } else {
                        per_fold.iter().sum::<f64>() / per_fold.len() as f64
                    };
                    recall.push(RecallCell {
                        n,
                        k,
                        method,
                        population,
                        recall: mean,
                        numerator: num,
                        denominator: den,
                        recall_over_annotated: if annotated == 0 { 0.0 } else { num as f64 / annotated as f64 },
                    });
                }
            }
            let success = |mi: usize| -> BTreeSet<&str> {
                outcomes
                    .iter()
                    .flat_map(|o| o.docs.iter())
                    .filter(|d| d.above_cutoff && d.first_hit[si][mi].is_some_and(|p| p < k))
                    .map(|d| d.id.as_str())
                    .collect()
            };
            let sets: BTreeMap<Method, BTreeSet<&str>> =
                [Method::Snippet, Method::Complement, Method::Keyword]
                    .into_iter()
                    .map(|m| (m, success(m as usize)))
                    .collect();
            for (a, b) in [
                (Method::Snippet, Method::Complement),
                (Method::Snippet, Method::Keyword),
                (Method::Complement, Method::Keyword),
            ] {
                jaccard_cells.push(JaccardCell {
                    n,
                    k,
                    method_a: a,
                    method_b: b,
                    value: jaccard(&sets[&a], &sets[&b]),
                });
            }
        }
    }
    let folds = outcomes
        .iter()
        .map(|o| FoldSummary {
            fold: o.fold,
            cutoff: o.cutoff,
            accuracy: o.accuracy,
            held_out: o.held_out,
            train: o.train_report.clone(),
            weights: o.weights.clone(),
        })
        .collect();
    ExperimentResult {
        recall,
        jaccard: jaccard_cells,
        folds,
        models: outcomes.into_iter().map(|o| o.model).collect(),
    }
}

/// Sequential k-fold run over the labeled documents of `corpus`.
pub fn run_experiment(corpus: &FilteredCorpus, config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let folds = fold_assignment(corpus, config)?;
    let outcomes = (0..config.folds)
        .map(|f| run_fold(corpus, &folds, f, config))
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize(config, outcomes))
}

/// Stratified folds over the labeled documents only.
pub fn fold_assignment(corpus: &FilteredCorpus, config: &ExperimentConfig) -> Result<FoldAssignment> {
    let labeled: Vec<_> = corpus
        .corpus
        .documents()
        .iter()
        .filter(|d| d.label().is_labeled())
        .cloned()
        .collect();
    let labeled = crate::corpus::Corpus::new(labeled, corpus.corpus.source_path())?;
    make_folds(&labeled, config.folds, config.seed)
}
