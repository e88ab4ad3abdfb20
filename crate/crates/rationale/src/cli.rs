//! Command-line interface.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use rationale_core::eval::GridSearchConfig;
use rationale_core::explain::{DEFAULT_RRF_K, DEFAULT_TOP_KEYWORDS, DEFAULT_WEIGHTS};
use rationale_core::features::DEFAULT_MAX_FEATURES;
use rationale_core::{
    build_keyword_lexicon, filter_annotated, rescue_false_negatives, score_documents,
    select_cutoff, Corpus, Document, ExperimentConfig, ExplainConfig, FlagRule, FusionConfig,
    FusionMode, Label, LinearModel, Method, TrainConfig, TrainReport,
};

use crate::config::{Format, MatchMode, RunConfig, Sizes};
use crate::report::write_or_print;
use crate::{corpus_file, html, model_file, pipeline, report, synth};

/// Invalid invocation detected after argument parsing; exits with status 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

fn usage<T>(msg: impl Into<String>) -> anyhow::Result<T> {
    Err(UsageError(msg.into()).into())
}

#[derive(Debug, Parser)]
#[command(name = "rationale", version, about = "Train, explain and evaluate rationale-extracting document classifiers")]
#[command(arg_required_else_help = true)]
pub struct Cli {
    /// TOML file with default values for any flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Read a corpus and report what was loaded.
    Ingest(IngestArgs),
    /// Fit a model on the labeled documents of a corpus.
    Train(TrainArgs),
    /// Score every document.
    Score(ScoreArgs),
    /// Extract ranked rationale snippets.
    Explain(ExplainArgs),
    /// Cross-validated rationale recall.
    Evaluate(EvaluateArgs),
    /// Flag rejected documents that contain a strongly responsive snippet.
    Rescue(RescueArgs),
    /// Write a synthetic corpus with planted rationales.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Model file to write.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub vocab_cap: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// L2 strength; defaults to 1 / (number of training documents).
    #[arg(long)]
    pub l2: Option<f64>,
    #[arg(long)]
    pub max_epochs: Option<usize>,
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct ExplainArgs {
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Only explain these documents (repeatable).
    #[arg(long)]
    pub id: Vec<String>,
    #[arg(long, value_parser = parse_snippet_size)]
    pub snippet_size: Option<usize>,
    #[arg(long)]
    pub top_k: Option<usize>,
    #[arg(long, value_parser = parse_method)]
    pub method: Option<Method>,
    #[arg(long, value_parser = parse_weights)]
    pub weights: Option<[f64; 3]>,
    #[arg(long)]
    pub rrf_k: Option<u32>,
    /// Absolute document-score cutoff.
    #[arg(long, conflicts_with = "cutoff_recall")]
    pub cutoff: Option<f64>,
    /// Choose the cutoff that keeps this share of the corpus's responsive documents.
    #[arg(long)]
    pub cutoff_recall: Option<f64>,
    #[arg(long)]
    pub keywords: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file; a directory for HTML output of several documents.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', value_parser = parse_snippet_size)]
    pub snippet_size: Vec<usize>,
    /// Largest K reported.
    #[arg(long)]
    pub top_k: Option<usize>,
    #[arg(long, value_parser = parse_weights)]
    pub weights: Option<[f64; 3]>,
    #[arg(long)]
    pub rrf_k: Option<u32>,
    #[arg(long)]
    pub cutoff_recall: Option<f64>,
    #[arg(long, value_enum)]
    pub match_mode: Option<MatchMode>,
    #[arg(long)]
    pub folds: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub keywords: Option<usize>,
    #[arg(long)]
    pub vocab_cap: Option<usize>,
    #[arg(long)]
    pub max_epochs: Option<usize>,
    /// L2 strength; defaults to 1 / (number of training documents).
    #[arg(long)]
    pub l2: Option<f64>,
    /// Tune fusion weights per fold over a simplex grid with this step.
    #[arg(long)]
    pub grid_step: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct RescueArgs {
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long, conflicts_with = "cutoff_recall")]
    pub cutoff: Option<f64>,
    #[arg(long)]
    pub cutoff_recall: Option<f64>,
    #[arg(long, value_parser = parse_snippet_size)]
    pub snippet_size: Option<usize>,
    /// Flag documents whose best snippet scores above this.
    #[arg(long, conflicts_with = "top_m")]
    pub threshold: Option<f64>,
    /// Flag this many documents.
    #[arg(long)]
    pub top_m: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 500)]
    pub responsive: usize,
    #[arg(long, default_value_t = 500)]
    pub non_responsive: usize,
    #[arg(long, default_value_t = 400)]
    pub filler_min: usize,
    #[arg(long, default_value_t = 1000)]
    pub filler_max: usize,
    #[arg(long, default_value_t = 30)]
    pub planted_min: usize,
    #[arg(long, default_value_t = 60)]
    pub planted_max: usize,
    #[arg(long, default_value_t = 1)]
    pub spans_per_doc: usize,
    #[arg(long, default_value_t = 2000)]
    pub filler_vocab: usize,
    #[arg(long, default_value_t = 150)]
    pub responsive_vocab: usize,
    #[arg(long, default_value_t = 0.1)]
    pub shared_fraction: f64,
    #[arg(long)]
    pub seed: Option<u64>,
}

pub fn parse_snippet_size(s: &str) -> Result<usize, String> {
    let n: usize = s.trim().parse().map_err(|e| format!("{e}"))?;
    if n < 2 || !n.is_multiple_of(2) {
        return Err(format!("snippet size must be an even number >= 2, got {n}"));
    }
    Ok(n)
}

pub fn parse_weights(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').collect();
    let [a, b, c] = parts.as_slice() else {
        return Err(format!("expected three comma-separated weights, got `{s}`"));
    };
    let mut w = [0.0f64; 3];
    for (slot, p) in w.iter_mut().zip([a, b, c]) {
        *slot = p.trim().parse().map_err(|e| format!("weight `{p}`: {e}"))?;
    }
    if w.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err("weights must be finite and non-negative".into());
    }
    Ok(w)
}

pub fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: rationale_core::Error| e.to_string())
}

fn required(value: Option<PathBuf>, flag: &str) -> anyhow::Result<PathBuf> {
    match value {
        Some(v) => Ok(v),
        None => usage(format!("--{flag} is required (on the command line or in --config)")),
    }
}

fn check_size(n: usize) -> anyhow::Result<usize> {
    parse_snippet_size(&n.to_string()).or_else(usage)
}

fn load_corpus(path: &Path) -> anyhow::Result<Corpus> {
    let (corpus, summary) = corpus_file::read_corpus(path)?;
    if summary.rationales_unlocated > 0 {
        eprintln!(
            "warning: {} rationale text(s) could not be located in their documents",
            summary.rationales_unlocated
        );
    }
    Ok(corpus)
}

fn warn_unconverged(what: &str, report: &TrainReport) {
    if !report.converged {
        eprintln!(
            "warning: {what}: training stopped after {} epochs without converging (max |gradient| = {:.3e})",
            report.epochs, report.gradient_max_norm
        );
    }
}

fn fusion_for(method: Method, weights: [f64; 3], rrf_k: u32) -> FusionConfig {
    let (weights, mode) = match method {
        Method::Snippet => ([1.0, 0.0, 0.0], FusionMode::ScoreBased),
        Method::Complement => ([0.0, 1.0, 0.0], FusionMode::ScoreBased),
        Method::Keyword => ([0.0, 0.0, 1.0], FusionMode::ScoreBased),
        Method::ScoreFusion => (weights, FusionMode::ScoreBased),
        Method::RankFusion => (weights, FusionMode::RankBased),
    };
    FusionConfig { weights, mode, rrf_k }
}

/// Cutoff from an explicit value, a target recall over labeled responsive documents, or 0.5.
fn resolve_cutoff(model: &LinearModel, corpus: &Corpus, cutoff: Option<f64>, recall: Option<f64>) -> anyhow::Result<f64> {
    match (cutoff, recall) {
        (Some(_), Some(_)) => usage("--cutoff and --cutoff-recall are mutually exclusive"),
        (Some(c), None) if !(0.0..=1.0).contains(&c) => usage("--cutoff must lie in [0, 1]"),
        (Some(c), None) => Ok(c),
        (None, Some(r)) => {
            let scores: Vec<f64> = corpus
                .documents()
                .iter()
                .filter(|d| d.label() == Label::Responsive)
                .map(|d| model.score_tokens(d.tokens()))
                .collect();
            select_cutoff(&scores, r).map_err(|e| UsageError(format!("--cutoff-recall: {e}")).into())
        }
        (None, None) => Ok(0.5),
    }
}

fn pool(workers: Option<usize>) -> anyhow::Result<rayon::ThreadPool> {
    if workers == Some(0) {
        return usage("--workers must be at least 1");
    }
    Ok(pipeline::thread_pool(workers)?)
}

pub fn run(cli: Cli) -> anyhow::Result<()> {
    let file = match &cli.config {
        Some(p) => RunConfig::load(p).map_err(|e| UsageError(e.to_string()))?,
        None => RunConfig::default(),
    };
    match cli.command {
        Command::Ingest(a) => ingest(a, file),
        Command::Train(a) => train_cmd(a, file),
        Command::Score(a) => score_cmd(a, file),
        Command::Explain(a) => explain_cmd(a, file),
        Command::Evaluate(a) => evaluate_cmd(a, file),
        Command::Rescue(a) => rescue_cmd(a, file),
        Command::Synth(a) => synth_cmd(a, file),
    }
}

fn ingest(a: IngestArgs, f: RunConfig) -> anyhow::Result<()> {
    let path = required(a.corpus.or(f.corpus), "corpus")?;
    let out = a.out.or(f.out);
    let (corpus, summary) = corpus_file::read_corpus(&path)?;
    let filtered = filter_annotated(&corpus, rationale_core::corpus::MIN_RATIONALE_LEN, rationale_core::corpus::MAX_RATIONALE_LEN);
    #[derive(serde::Serialize)]
    struct Out {
        ingest: rationale_core::IngestSummary,
        filter: rationale_core::FilterCounts,
    }
    let text = serde_json::to_string_pretty(&Out {
        ingest: summary,
        filter: filtered.counts,
    })? + "\n";
    write_or_print(out.as_deref(), &text).context("writing summary")?;
    Ok(())
}

fn train_cmd(a: TrainArgs, f: RunConfig) -> anyhow::Result<()> {
    let path = required(a.corpus.or(f.corpus), "corpus")?;
    let out = required(a.out.or(f.out), "out")?;
    let defaults = TrainConfig::default();
    let config = TrainConfig {
        l2_lambda: a.l2.or(f.l2),
        max_epochs: a.max_epochs.or(f.max_epochs).unwrap_or(defaults.max_epochs),
        convergence_tol: a.tolerance.or(f.tolerance).unwrap_or(defaults.convergence_tol),
        seed: a.seed.or(f.seed).unwrap_or(defaults.seed),
        ..defaults
    };
    config.validate().map_err(|e| UsageError(e.to_string()))?;
    let cap = a.vocab_cap.or(f.vocab_cap).unwrap_or(DEFAULT_MAX_FEATURES);
    if cap == 0 {
        return usage("--vocab-cap must be positive");
    }
    let corpus = load_corpus(&path)?;
    let (model, report) = pipeline::train_corpus(&corpus, cap, &config)?;
    warn_unconverged("train", &report);
    model_file::save(&model, &out)?;
    eprintln!(
        "trained on {} features in {} epochs (loss {:.6})",
        model.vocab().len(),
        report.epochs,
        report.loss
    );
    Ok(())
}

fn score_cmd(a: ScoreArgs, f: RunConfig) -> anyhow::Result<()> {
    let path = required(a.corpus.or(f.corpus), "corpus")?;
    let model_path = required(a.model.or(f.model), "model")?;
    let format = a.format.or(f.format).unwrap_or(Format::Json);
    if format == Format::Html {
        return usage("score supports --format json or csv");
    }
    let out = a.out.or(f.out);
    let model = model_file::load(&model_path)?;
    let corpus = load_corpus(&path)?;
    let scores = score_documents(&model, corpus.documents());
    let text = match format {
        Format::Csv => report::scores_csv(&scores)?,
        _ => report::scores_json(&scores),
    };
    write_or_print(out.as_deref(), &text).context("writing scores")?;
    Ok(())
}

fn explain_cmd(a: ExplainArgs, f: RunConfig) -> anyhow::Result<()> {
    let path = required(a.corpus.or(f.corpus), "corpus")?;
    let model_path = required(a.model.or(f.model), "model")?;
    let n = match (a.snippet_size, f.snippet_size.map(Sizes::into_vec)) {
        (Some(n), _) => n,
        (None, Some(v)) if v.len() == 1 => check_size(v[0])?,
        (None, Some(_)) => return usage("explain takes a single --snippet-size"),
        (None, None) => 50,
    };
    let top_k = a.top_k.or(f.top_k).unwrap_or(5);
    if top_k == 0 {
        return usage("--top-k must be at least 1");
    }
    let method = a.method.or(f.method).unwrap_or(Method::ScoreFusion);
    let fusion = fusion_for(
        method,
        a.weights.or(f.weights).unwrap_or(DEFAULT_WEIGHTS),
        a.rrf_k.or(f.rrf_k).unwrap_or(DEFAULT_RRF_K),
    );
    fusion.validate().map_err(|e| UsageError(e.to_string()))?;
    let format = a.format.or(f.format).unwrap_or(Format::Json);
    if format == Format::Csv {
        return usage("explain supports --format json or html");
    }
    let out = a.out.or(f.out);
    let keywords = a.keywords.or(f.keywords).unwrap_or(DEFAULT_TOP_KEYWORDS);
    let workers = pool(a.workers.or(f.workers))?;
    let (cutoff, cutoff_recall) = match (a.cutoff, a.cutoff_recall) {
        (None, None) => (f.cutoff, f.cutoff_recall),
        flags => flags,
    };

    let model = model_file::load(&model_path)?;
    let corpus = load_corpus(&path)?;
    let docs: Vec<&Document> = if a.id.is_empty() {
        corpus.documents().iter().collect()
    } else {
        a.id.iter()
            .map(|id| corpus.get(id).with_context(|| format!("no document with id `{id}`")))
            .collect::<anyhow::Result<_>>()?
    };
    if format == Format::Html && docs.len() > 1 && out.is_none() {
        return usage("HTML output for several documents needs --out <directory>");
    }
    let config = ExplainConfig {
        snippet_size: n,
        fusion,
        cutoff: resolve_cutoff(&model, &corpus, cutoff, cutoff_recall)?,
    };
    let lexicon = build_keyword_lexicon(&model, keywords, 0.0);
    let reports = pipeline::explain_all(&workers, &model, &docs, &lexicon, &config)?;

    match format {
        Format::Html if docs.len() == 1 => {
            write_or_print(out.as_deref(), &html::render_html(&reports[0], docs[0], top_k)).context("writing HTML")?
        }
        Format::Html => {
            let dir = out.expect("checked above");
            std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
            for (r, d) in reports.iter().zip(&docs) {
                let p = dir.join(format!("{}.html", file_stem(d.id())));
                std::fs::write(&p, html::render_html(r, d, top_k)).with_context(|| format!("writing {}", p.display()))?;
            }
        }
        _ => write_or_print(out.as_deref(), &report::explanations_json(&reports, top_k)).context("writing report")?,
    }
    Ok(())
}

/// Document id made safe for use as a file name.
fn file_stem(id: &str) -> String {
    id.chars()
        .map(|c| if c.is_alphanumeric() || "-_.".contains(c) { c } else { '_' })
        .collect()
}

fn evaluate_cmd(a: EvaluateArgs, f: RunConfig) -> anyhow::Result<()> {
    let path = required(a.corpus.or(f.corpus), "corpus")?;
    let d = ExperimentConfig::default();
    let sizes = if !a.snippet_size.is_empty() {
        a.snippet_size
    } else if let Some(s) = f.snippet_size {
        s.into_vec().into_iter().map(check_size).collect::<anyhow::Result<_>>()?
    } else {
        d.snippet_sizes.clone()
    };
    let max_k = a.top_k.or(f.top_k).unwrap_or(d.max_k);
    let config = ExperimentConfig {
        snippet_sizes: sizes,
        max_k,
        fusion_weights: a.weights.or(f.weights).unwrap_or(d.fusion_weights),
        rrf_k: a.rrf_k.or(f.rrf_k).unwrap_or(d.rrf_k),
        criterion: a.match_mode.or(f.match_mode).map(Into::into).unwrap_or(d.criterion),
        target_recall: a.cutoff_recall.or(f.cutoff_recall).unwrap_or(d.target_recall),
        folds: a.folds.or(f.folds).unwrap_or(d.folds),
        seed: a.seed.or(f.seed).unwrap_or(d.seed),
        keyword_top_n: a.keywords.or(f.keywords).unwrap_or(d.keyword_top_n),
        vocab_cap: a.vocab_cap.or(f.vocab_cap).unwrap_or(d.vocab_cap),
        train: TrainConfig {
            max_epochs: a.max_epochs.or(f.max_epochs).unwrap_or(d.train.max_epochs),
            l2_lambda: a.l2.or(f.l2),
            ..d.train.clone()
        },
        grid_search: a.grid_step.or(f.grid_step).map(|step| GridSearchConfig { step, k: 1 }),
        ..d
    };
    config.validate().map_err(|e| UsageError(e.to_string()))?;
    config.train.validate().map_err(|e| UsageError(e.to_string()))?;
    if config.folds < 2 {
        return usage("--folds must be at least 2");
    }
    if let Some(g) = config.grid_search {
        rationale_core::eval::simplex_lattice(g.step).map_err(|e| UsageError(format!("--grid-step: {e}")))?;
    }
    let format = a.format.or(f.format).unwrap_or(Format::Json);
    if format == Format::Html {
        return usage("evaluate supports --format json or csv");
    }
    let out = a.out.or(f.out);
    let workers = pool(a.workers.or(f.workers))?;

    let corpus = load_corpus(&path)?;
    let filtered = filter_annotated(&corpus, rationale_core::corpus::MIN_RATIONALE_LEN, rationale_core::corpus::MAX_RATIONALE_LEN);
    if filtered.annotated.is_empty() {
        bail!("no responsive document has a rationale span of 10 to 249 tokens");
    }
    let result = pipeline::run_experiment(&workers, &filtered, &config)?;
    for fold in &result.folds {
        warn_unconverged(&format!("fold {}", fold.fold), &fold.train);
    }
    let text = match format {
        Format::Csv => report::recall_csv(&result)?,
        _ => report::experiment_json(&result, &config),
    };
    write_or_print(out.as_deref(), &text).context("writing results")?;
    Ok(())
}

fn rescue_cmd(a: RescueArgs, f: RunConfig) -> anyhow::Result<()> {
    let path = required(a.corpus.or(f.corpus), "corpus")?;
    let model_path = required(a.model.or(f.model), "model")?;
    let n = match (a.snippet_size, f.snippet_size.map(Sizes::into_vec)) {
        (Some(n), _) => n,
        (None, Some(v)) if v.len() == 1 => check_size(v[0])?,
        (None, Some(_)) => return usage("rescue takes a single --snippet-size"),
        (None, None) => 50,
    };
    let rule = match (a.threshold, a.top_m) {
        (Some(t), _) => FlagRule::Threshold(t),
        (None, Some(m)) => FlagRule::TopM(m),
        (None, None) => match (f.threshold, f.top_m) {
            (Some(_), Some(_)) => return usage("threshold and top-m are mutually exclusive"),
            (Some(t), None) => FlagRule::Threshold(t),
            (None, Some(m)) => FlagRule::TopM(m),
            (None, None) => FlagRule::Threshold(0.8),
        },
    };
    if let FlagRule::Threshold(t) = rule {
        if !t.is_finite() {
            return usage("--threshold must be finite");
        }
    }
    let format = a.format.or(f.format).unwrap_or(Format::Json);
    if format == Format::Html {
        return usage("rescue supports --format json or csv");
    }
    let out = a.out.or(f.out);
    let (cutoff, cutoff_recall) = match (a.cutoff, a.cutoff_recall) {
        (None, None) => (f.cutoff, f.cutoff_recall),
        flags => flags,
    };

    let model = model_file::load(&model_path)?;
    let corpus = load_corpus(&path)?;
    let cutoff = resolve_cutoff(&model, &corpus, cutoff, cutoff_recall)?;
    let found = rescue_false_negatives(&model, corpus.documents(), cutoff, n, rule)?;
    let text = match format {
        Format::Csv => report::rescue_csv(&found)?,
        _ => report::rescue_json(&found),
    };
    write_or_print(out.as_deref(), &text).context("writing candidates")?;
    Ok(())
}

fn synth_cmd(a: SynthArgs, f: RunConfig) -> anyhow::Result<()> {
    let out = a.out.or(f.out);
    let spec = synth::SyntheticSpec {
        responsive: a.responsive,
        non_responsive: a.non_responsive,
        filler_len: (a.filler_min, a.filler_max),
        planted_len: (a.planted_min, a.planted_max),
        spans_per_doc: a.spans_per_doc,
        filler_vocab: a.filler_vocab,
        responsive_vocab: a.responsive_vocab,
        shared_fraction: a.shared_fraction,
        seed: a.seed.or(f.seed).unwrap_or(0),
    };
    spec.validate().map_err(|e| UsageError(e.to_string()))?;
    let records = synth::synth_corpus(&spec)?;
    let mut buf = Vec::new();
    corpus_file::write_records(&records, &mut buf)?;
    write_or_print(out.as_deref(), std::str::from_utf8(&buf)?).context("writing corpus")?;
    Ok(())
}

/// Parses `args` and runs the command, returning the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                2
            } else {
                1
            }
        }
    }
}
