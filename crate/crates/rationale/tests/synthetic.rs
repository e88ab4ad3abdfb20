use rationale::corpus_file::{write_records, FileLabel};
use rationale::pipeline;
use rationale::synth::{synth_corpus, SyntheticSpec};
use rationale_core::corpus::{MAX_RATIONALE_LEN, MIN_RATIONALE_LEN};
use rationale_core::{filter_annotated, ingest, ExperimentConfig, Method, Population, RawRecord};

#[test]
fn default_spec_shape() {
    let records = synth_corpus(&SyntheticSpec {
        seed: 7,
        ..SyntheticSpec::default()
    })
    .unwrap();
    assert_eq!(records.len(), 1000);
    let responsive: Vec<_> = records.iter().filter(|r| r.label == Some(FileLabel::Responsive)).collect();
    assert_eq!(responsive.len(), 500);
    for r in responsive {
        let spans = r.rationale_spans.as_ref().unwrap();
        assert_eq!(spans.len(), 1);
        assert!((30..=60).contains(&(spans[0][1] - spans[0][0])));
    }
}

#[test]
fn disjoint_vocabularies_keep_planted_tokens_out_of_filler() {
    let spec = SyntheticSpec {
        responsive: 40,
        non_responsive: 40,
        shared_fraction: 0.0,
        seed: 1,
        ..SyntheticSpec::default()
    };
    let records = synth_corpus(&spec).unwrap();
    let planted: std::collections::BTreeSet<&str> = records
        .iter()
        .flat_map(|r| {
            let toks: Vec<&str> = r.text.split(' ').collect();
            r.rationale_spans
                .iter()
                .flatten()
                .flat_map(move |&[s, e]| toks[s..e].to_vec())
                .collect::<Vec<_>>()
        })
        .collect();
    for r in &records {
        let toks: Vec<&str> = r.text.split(' ').collect();
        for (i, t) in toks.iter().enumerate() {
            let inside = r.rationale_spans.iter().flatten().any(|&[s, e]| s <= i && i < e);
            if !inside {
                assert!(!planted.contains(t), "{} token {i} `{t}`", r.id);
            }
        }
    }
}

#[test]
fn files_are_byte_identical_per_seed() {
    let spec = SyntheticSpec {
        responsive: 30,
        non_responsive: 30,
        seed: 42,
        ..SyntheticSpec::default()
    };
    let bytes = |s: &SyntheticSpec| {
        let mut buf = Vec::new();
        write_records(&synth_corpus(s).unwrap(), &mut buf).unwrap();
        buf
    };
    assert_eq!(bytes(&spec), bytes(&spec));
}

#[test]
fn keyword_trails_snippet_when_lexicon_cannot_cover_responsive_vocabulary() {
    let spec = SyntheticSpec {
        responsive: 200,
        non_responsive: 200,
        responsive_vocab: 500,
        seed: 7,
        ..SyntheticSpec::default()
    };
    let records = synth_corpus(&spec).unwrap();
    let corpus = ingest(records.into_iter().map(RawRecord::from), "synthetic").unwrap().0;
    let filtered = filter_annotated(&corpus, MIN_RATIONALE_LEN, MAX_RATIONALE_LEN);
    let config = ExperimentConfig::default();
    let result = pipeline::run_experiment(&pipeline::thread_pool(None).unwrap(), &filtered, &config).unwrap();

    assert_eq!(result.recall.len(), 3 * 5 * 5 * 2);
    assert!(result.recall.iter().all(|c| (0.0..=1.0).contains(&c.recall)));
    let r1 = |m| result.cell(50, 1, m, Population::Cutoff).unwrap().recall;
    assert!(
        r1(Method::Snippet) > r1(Method::Keyword),
        "snippet {} keyword {}",
        r1(Method::Snippet),
        r1(Method::Keyword)
    );
}
