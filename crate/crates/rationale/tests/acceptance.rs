//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rationale::corpus_file::{write_records, CorpusRecord};
use rationale::synth::{synth_corpus, SyntheticSpec};
use rationale::{model_file, pipeline, report};
use rationale_core::corpus::{MAX_RATIONALE_LEN, MIN_RATIONALE_LEN};
use rationale_core::explain::{complement_from_scores, fuse_components, rank_descending, DEFAULT_WEIGHTS};
use rationale_core::{
    build_keyword_lexicon, cscore, filter_annotated, generate_snippets, ingest, loss_and_gradient,
    minimal_flip_set, rescue_false_negatives, rrf_score, select_cutoff, vectorize, Corpus,
    Document, DocumentScorer, ExperimentConfig, ExperimentResult, ExplainConfig, FeatureVector,
    FlagRule, FlipOutcome, FusionConfig, FusionMode, Label, LinearModel, Method,
    Population, RawRecord, TrainConfig, Vocabulary,
};

type Outcome = Result<String, String>;

macro_rules! check {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn benchmark_spec() -> SyntheticSpec {
    SyntheticSpec {
        seed: 7,
        ..SyntheticSpec::default()
    }
}

fn to_corpus(records: &[CorpusRecord]) -> Corpus {
    ingest(records.iter().cloned().map(RawRecord::from), "synthetic").unwrap().0
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

fn criterion_1() -> Outcome {
    for (doc, without, expect) in [(0.8, 0.2, 0.75), (0.4, 0.9, 0.0)] {
        let got = complement_from_scores(doc, without);
        check!(got == expect, "complement({doc}, {without}) = {got}, expected {expect}");
    }
    let got = complement_from_scores(0.3482, 0.0292);
    check!((got - 0.9161).abs() <= 1e-4, "complement(0.3482, 0.0292) = {got}");

    let vocab = Vocabulary::from_tokens(vec!["a".into(), "b".into()], 10).unwrap();
    let model = LinearModel::from_parts(vocab, vec![3.0, -1.0], 0.0, TrainConfig::default()).unwrap();
    let lexicon = build_keyword_lexicon(&model, 100, 0.0);
    let doc_vec = vectorize(&["a", "b", "x", "y"].map(String::from), model.vocab());
    let c = cscore("a", &lexicon, &doc_vec);
    check!(c == 0.75, "cscore(w=3.0, x=0.25) = {c}");

    let r = rrf_score(1, 60);
    check!(r == 1.0 / 61.0, "rrf(1, 60) = {r}");
    let cfg = FusionConfig::new(DEFAULT_WEIGHTS, FusionMode::ScoreBased, 60).unwrap();
    let f = fuse_components([0.8, 0.5, 0.3], [1, 1, 1], &cfg);
    check!(f == 0.69, "score fusion = {f:?}");
    Ok(format!("complement 0.9161 -> {got:.6}, cscore 0.75, rrf 1/61, fusion {f}"))
}

fn loss_oracle(vectors: &[FeatureVector], y: &[f64], w: &[f64], b: f64, l2: f64) -> f64 {
    let mut loss = 0.0;
    for (v, &t) in vectors.iter().zip(y) {
        let p = sigmoid(b + v.entries().iter().map(|&(i, x)| w[i as usize] * x).sum::<f64>());
        loss -= t * p.ln() + (1.0 - t) * (1.0 - p).ln();
    }
    loss + 0.5 * l2 * w.iter().map(|x| x * x).sum::<f64>()
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let words = ["f0", "f1", "f2", "f3", "f4"];
    let vocab = Vocabulary::from_tokens(words.map(String::from).to_vec(), 5).unwrap();
    let vectors: Vec<FeatureVector> = (0..30)
        .map(|_| {
            let n = rng.gen_range(1..25);
            let toks: Vec<String> = (0..n).map(|_| words[rng.gen_range(0..5)].to_string()).collect();
            vectorize(&toks, &vocab)
        })
        .collect();
    let y: Vec<f64> = (0..30).map(|_| f64::from(rng.gen_range(0..2u8))).collect();
    let l2 = 1.0 / 30.0;
    let h = 1e-6;
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let w: Vec<f64> = (0..5).map(|_| rng.gen_range(-4.0..4.0)).collect();
        let b = rng.gen_range(-2.0..2.0);
        let (_, gw, gb) = loss_and_gradient(&vectors, &y, &w, b, l2);
        let rel = |a: f64, fd: f64| (a - fd).abs() / a.abs().max(fd.abs()).max(1e-3);
        for j in 0..5 {
            let (mut wp, mut wm) = (w.clone(), w.clone());
            wp[j] += h;
            wm[j] -= h;
            let fd = (loss_oracle(&vectors, &y, &wp, b, l2) - loss_oracle(&vectors, &y, &wm, b, l2)) / (2.0 * h);
            worst = worst.max(rel(gw[j], fd));
        }
        let fd = (loss_oracle(&vectors, &y, &w, b + h, l2) - loss_oracle(&vectors, &y, &w, b - h, l2)) / (2.0 * h);
        worst = worst.max(rel(gb, fd));
    }
    check!(worst < 1e-5, "max relative error {worst:.3e}");
    Ok(format!("max relative error {worst:.2e} over 20 points"))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..1000 {
        let w = rng.gen_range(1..=2000usize);
        let n = 2 * rng.gen_range(5..=150usize);
        let items = vec![(); w];
        let got: Vec<(usize, usize)> = generate_snippets(&items, n)
            .map_err(|e| e.to_string())?
            .iter()
            .map(|s| (s.span.start, s.span.end))
            .collect();
        let mut brute = Vec::new();
        for start in (0..w).step_by(n / 2) {
            let end = (start + n).min(w);
            brute.push((start, end));
            if end == w {
                break;
            }
        }
        check!(got == brute, "W={w} n={n}: {got:?} vs {brute:?}");
        let mut covered = vec![false; w];
        for &(s, e) in &got {
            covered[s..e].iter_mut().for_each(|c| *c = true);
        }
        check!(covered.iter().all(|&c| c), "W={w} n={n}: gap in coverage");
        for pair in got.windows(2) {
            check!(pair[0].1 - pair[1].0 == n / 2, "W={w} n={n}: overlap {}", pair[0].1 - pair[1].0);
        }
    }
    Ok("1000 random (W, n) pairs".into())
}

fn fused_order(scores: &[[f64; 3]], cfg: &FusionConfig) -> Vec<usize> {
    let cols: Vec<Vec<usize>> = (0..3)
        .map(|c| rank_descending(&scores.iter().map(|s| s[c]).collect::<Vec<_>>()))
        .collect();
    let fused: Vec<f64> = (0..scores.len())
        .map(|i| fuse_components(scores[i], [cols[0][i], cols[1][i], cols[2][i]], cfg))
        .collect();
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| fused[b].total_cmp(&fused[a]));
    order
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let words: Vec<String> = (0..30).map(|i| format!("w{i}")).collect();
    let vocab = Vocabulary::from_tokens(words.clone(), 100).unwrap();
    let weights: Vec<f64> = (0..30).map(|_| rng.gen_range(-3.0..3.0)).collect();
    let model = LinearModel::from_parts(vocab, weights, -0.2, TrainConfig::default()).unwrap();
    let lexicon = build_keyword_lexicon(&model, 10, 0.0);
    let cfg = FusionConfig::new([0.5, 0.3, 0.2], FusionMode::RankBased, 60).unwrap();
    for d in 0..100 {
        let len = rng.gen_range(20..400);
        let text: Vec<&str> = (0..len).map(|_| words[rng.gen_range(0..30)].as_str()).collect();
        let doc = Document::new("d", text.join(" "), Label::Unlabeled, vec![]).unwrap();
        let scored = DocumentScorer::new(&model, doc.tokens(), &lexicon)
            .components(20)
            .map_err(|e| e.to_string())?;
        let scores: Vec<[f64; 3]> = scored.iter().map(|s| s.components()).collect();
        let base = fused_order(&scores, &cfg);
        for c in 0..3 {
            let cubed: Vec<[f64; 3]> = scores
                .iter()
                .map(|s| {
                    let mut s = *s;
                    s[c] = s[c].powi(3);
                    s
                })
                .collect();
            check!(fused_order(&cubed, &cfg) == base, "document {d}: ordering changed when cubing component {c}");
        }
    }
    Ok("100 documents, each component cubed".into())
}

fn criterion_5() -> Outcome {
    let hand = [0.95, 0.9, 0.8, 0.6, 0.4, 0.3, 0.2, 0.1];
    let c = select_cutoff(&hand, 0.75).map_err(|e| e.to_string())?;
    check!(c == 0.3, "hand example gave {c}");
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..50 {
        let n = rng.gen_range(1..300);
        let mut set = BTreeSet::new();
        while set.len() < n {
            set.insert(rng.gen_range(1..10_000_000u32));
        }
        let scores: Vec<f64> = set.into_iter().map(|s| f64::from(s) / 1e7).collect();
        let c = select_cutoff(&scores, 0.75).map_err(|e| e.to_string())?;
        let kept = scores.iter().filter(|&&s| s >= c).count();
        let r = scores.len() as f64;
        check!(kept as f64 / r >= 0.75, "list {i}: recall {}", kept as f64 / r);
        check!(((kept - 1) as f64) / r < 0.75, "list {i}: not tight");
    }
    Ok("hand example 0.3, 50 random lists".into())
}

struct Benchmark {
    records: Vec<CorpusRecord>,
    corpus: Corpus,
    result: ExperimentResult,
    elapsed: Duration,
}

fn run_benchmark() -> Benchmark {
    let records = synth_corpus(&benchmark_spec()).unwrap();
    let corpus = to_corpus(&records);
    let config = ExperimentConfig::default();
    let start = Instant::now();
    let filtered = filter_annotated(&corpus, MIN_RATIONALE_LEN, MAX_RATIONALE_LEN);
    let pool = pipeline::thread_pool(None).unwrap();
    let result = pipeline::run_experiment(&pool, &filtered, &config).unwrap();
    Benchmark {
        records,
        corpus,
        result,
        elapsed: start.elapsed(),
    }
}

fn recall_at(b: &Benchmark, n: usize, k: usize, m: Method) -> f64 {
    b.result.cell(n, k, m, Population::Cutoff).map(|c| c.recall).unwrap_or(f64::NAN)
}

fn criterion_6(b: &Benchmark) -> Outcome {
    check!(b.elapsed < Duration::from_secs(300), "cross-validation took {:?}", b.elapsed);
    let acc = b.result.mean_accuracy();
    check!(acc >= 0.95, "held-out accuracy {acc:.3}");
    let r1 = recall_at(b, 50, 1, Method::Snippet);
    let r5 = recall_at(b, 50, 5, Method::Snippet);
    check!(r1 >= 0.60, "snippet recall@1 {r1:.3}");
    check!(r5 >= 0.85, "snippet recall@5 {r5:.3}");
    let config = ExperimentConfig::default();
    for &n in &config.snippet_sizes {
        for m in Method::ALL {
            for p in Population::BOTH {
                let series: Vec<f64> = (1..=config.max_k)
                    .map(|k| b.result.cell(n, k, m, p).map(|c| c.recall).unwrap_or(f64::NAN))
                    .collect();
                check!(series.windows(2).all(|w| w[0] <= w[1]), "n={n} {m} {}: {series:?}", p.name());
            }
        }
    }
    Ok(format!(
        "{:.1}s, accuracy {acc:.3}, snippet recall@1 {r1:.3}, recall@5 {r5:.3}",
        b.elapsed.as_secs_f64()
    ))
}

fn criterion_7(b: &Benchmark) -> Outcome {
    let mut detail = Vec::new();
    for n in ExperimentConfig::default().snippet_sizes {
        let kw = recall_at(b, n, 1, Method::Keyword);
        let sn = recall_at(b, n, 1, Method::Snippet);
        check!(kw <= sn, "n={n}: keyword {kw:.3} > snippet {sn:.3}");
        detail.push(format!("n={n} keyword {kw:.3} <= snippet {sn:.3}"));
    }
    let best = [Method::Snippet, Method::Complement, Method::Keyword]
        .map(|m| recall_at(b, 50, 1, m))
        .into_iter()
        .fold(f64::MIN, f64::max);
    for m in [Method::ScoreFusion, Method::RankFusion] {
        let r = recall_at(b, 50, 1, m);
        check!(r >= best - 0.02, "{m} recall@1 {r:.3} < best individual {best:.3} - 0.02");
        detail.push(format!("{m} {r:.3}"));
    }
    Ok(detail.join(", "))
}

fn train_full(corpus: &Corpus, config: &TrainConfig) -> LinearModel {
    pipeline::train_corpus(corpus, rationale_core::features::DEFAULT_MAX_FEATURES, config).unwrap().0
}

fn criterion_8(b: &Benchmark) -> Outcome {
    let model = train_full(&b.corpus, &TrainConfig::default());
    let (mut sets, mut ok) = (0, 0);
    for d in b.corpus.documents().iter().filter(|d| d.label() == Label::Responsive) {
        let FlipOutcome::Flipped(set) = minimal_flip_set(&model, d) else {
            continue;
        };
        sets += 1;
        let without = |removed: &[String]| -> f64 {
            let kept: Vec<String> = d.tokens().iter().filter(|t| !removed.contains(t)).cloned().collect();
            model.score_tokens(&kept)
        };
        if without(&set) < 0.5 && without(&set[..set.len() - 1]) >= 0.5 {
            ok += 1;
        }
    }
    check!(sets > 0, "no flip sets returned");
    check!(ok == sets, "{ok} of {sets} flip sets satisfy the contract");
    Ok(format!("{ok}/{sets} flip sets valid and minimal in order"))
}

fn criterion_9(b: &Benchmark) -> Outcome {
    let model = train_full(
        &b.corpus,
        &TrainConfig {
            l2_lambda: Some(0.01),
            ..TrainConfig::default()
        },
    );
    let spec = SyntheticSpec {
        responsive: 120,
        non_responsive: 50,
        filler_len: (2000, 2000),
        planted_len: (30, 60),
        seed: 99,
        ..benchmark_spec()
    };
    let generated = to_corpus(&synth_corpus(&spec).unwrap());
    let buried: Vec<&Document> = generated
        .documents()
        .iter()
        .filter(|d| d.label() == Label::Responsive && model.score_tokens(d.tokens()) < 0.5)
        .take(50)
        .collect();
    check!(buried.len() == 50, "only {} buried documents score below 0.5", buried.len());
    let filler: Vec<&Document> = generated.documents().iter().filter(|d| d.label() == Label::NotResponsive).collect();
    let pool = buried.iter().chain(&filler).copied();
    let flagged = rescue_false_negatives(&model, pool, 0.5, 50, FlagRule::Threshold(0.8)).map_err(|e| e.to_string())?;
    let hits = flagged.iter().filter(|c| c.doc_id.starts_with('r')).count();
    let false_flags = flagged.len() - hits;
    check!(hits * 2 >= buried.len(), "flagged {hits} of {} buried documents", buried.len());
    check!(false_flags == 0, "flagged {false_flags} pure-filler documents");
    Ok(format!("l2 0.01, flagged {hits}/50 buried, {false_flags}/{} filler", filler.len()))
}

fn pipeline_outputs(workers: usize) -> Vec<Vec<u8>> {
    let spec = SyntheticSpec {
        responsive: 60,
        non_responsive: 60,
        seed: 21,
        ..benchmark_spec()
    };
    let records = synth_corpus(&spec).unwrap();
    let mut corpus_bytes = Vec::new();
    write_records(&records, &mut corpus_bytes).unwrap();
    let corpus = to_corpus(&records);
    let pool = pipeline::thread_pool(Some(workers)).unwrap();
    let config = ExperimentConfig {
        folds: 3,
        ..ExperimentConfig::default()
    };
    let filtered = filter_annotated(&corpus, MIN_RATIONALE_LEN, MAX_RATIONALE_LEN);
    let result = pipeline::run_experiment(&pool, &filtered, &config).unwrap();
    let model = train_full(&corpus, &TrainConfig::default());
    let lexicon = build_keyword_lexicon(&model, 100, 0.0);
    let docs: Vec<&Document> = corpus.documents().iter().collect();
    let explain = ExplainConfig {
        snippet_size: 50,
        fusion: FusionConfig::default(),
        cutoff: 0.5,
    };
    let reports = pipeline::explain_all(&pool, &model, &docs, &lexicon, &explain).unwrap();
    vec![
        corpus_bytes,
        report::experiment_json(&result, &config).into_bytes(),
        model_file::to_json(&model).into_bytes(),
        report::explanations_json(&reports, 5).into_bytes(),
    ]
}

fn criterion_10(b: &Benchmark) -> Outcome {
    let first = pipeline_outputs(1);
    let second = pipeline_outputs(4);
    for (i, name) in ["corpus", "experiment", "model", "explanations"].iter().enumerate() {
        check!(first[i] == second[i], "{name} output differs between runs");
    }
    let model = train_full(&b.corpus, &TrainConfig::default());
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("model.json");
    model_file::save(&model, &path).map_err(|e| e.to_string())?;
    let back = model_file::load(Path::new(&path)).map_err(|e| e.to_string())?;
    let mut checked = 0;
    for d in b.corpus.documents() {
        let (a, c) = (model.score_tokens(d.tokens()), back.score_tokens(d.tokens()));
        check!(a.to_bits() == c.to_bits(), "{}: {a} vs {c}", d.id());
        checked += 1;
    }
    check!(b.records.len() == checked, "scored {checked} of {} documents", b.records.len());
    Ok(format!("4 outputs byte-identical across runs, {checked} scores bit-exact after reload"))
}

fn run(name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panicked".into()))
    });
    match outcome {
        Ok(detail) => {
            println!("PASS  {name}: {detail}");
            true
        }
        Err(why) => {
            println!("FAIL  {name}: {why}");
            false
        }
    }
}

fn main() {
    let mut all = true;
    all &= run("1 formula fidelity", criterion_1);
    all &= run("2 gradient oracle", criterion_2);
    all &= run("3 snippet-window oracle", criterion_3);
    all &= run("4 rank-fusion invariance", criterion_4);
    all &= run("5 cutoff rule", criterion_5);
    let bench = catch_unwind(run_benchmark).ok();
    let with_bench = |name: &str, f: fn(&Benchmark) -> Outcome| match &bench {
        Some(b) => run(name, || f(b)),
        None => run(name, || Err("synthetic benchmark did not run".into())),
    };
    all &= with_bench("6 synthetic benchmark", criterion_6);
    all &= with_bench("7 method ordering", criterion_7);
    all &= with_bench("8 flip-set contract", criterion_8);
    all &= with_bench("9 false-negative rescue", criterion_9);
    all &= with_bench("10 determinism and round-trip", criterion_10);
    if !all {
        std::process::exit(1);
    }
}
