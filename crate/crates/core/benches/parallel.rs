//! Compares the rayon-backed data-parallel path against the sequential
//! fallback on the per-document and per-sentence workloads.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use ner_lab_core::model::{EntityKind, Layer};
use ner_lab_core::synthetic::{lexicon_corpus, SynthConfig};
use ner_lab_core::tagger::{self, FeatureConfig, FeatureExtractor, TrainParams};
use ner_lab_core::{evaluate, par, stats};

const LAYER: Layer = Layer::Entity(EntityKind::Adr);

fn bench_corpus_stats(c: &mut Criterion) {
    let (corpus, _) = lexicon_corpus(
        &SynthConfig {
            documents: 300,
            sentences_per_document: 8,
            ..Default::default()
        },
        42,
    );

    let mut group = c.benchmark_group("corpus_stats");
    group.bench_function("sequential", |b| {
        par::force_sequential(true);
        b.iter(|| stats::corpus_stats(black_box(&corpus)).unwrap());
    });
    group.bench_function("parallel", |b| {
        par::force_sequential(false);
        b.iter(|| stats::corpus_stats(black_box(&corpus)).unwrap());
    });
    group.finish();
    par::force_sequential(false);
}

fn bench_tagging(c: &mut Criterion) {
    let (corpus, lexicon) = lexicon_corpus(
        &SynthConfig {
            documents: 60,
            sentences_per_document: 6,
            ..Default::default()
        },
        42,
    );
    let config = FeatureConfig {
        category_lexicons: vec![lexicon],
        ..Default::default()
    };
    par::force_sequential(true);
    let outcome = tagger::train(
        &corpus,
        LAYER,
        TrainParams { epochs: 3, seed: 42 },
        config.clone(),
    )
    .unwrap();
    par::force_sequential(false);
    let extractor = FeatureExtractor::new(config);

    let mut group = c.benchmark_group("tag_corpus");
    group.bench_function("sequential", |b| {
        par::force_sequential(true);
        b.iter(|| tagger::tag_corpus(black_box(&outcome.model), &extractor, black_box(&corpus)));
    });
    group.bench_function("parallel", |b| {
        par::force_sequential(false);
        b.iter(|| tagger::tag_corpus(black_box(&outcome.model), &extractor, black_box(&corpus)));
    });
    group.finish();
    par::force_sequential(false);
}

fn bench_agreement(c: &mut Criterion) {
    let (a, _) = lexicon_corpus(
        &SynthConfig {
            documents: 200,
            sentences_per_document: 6,
            ..Default::default()
        },
        1,
    );
    let (b_corpus, _) = lexicon_corpus(
        &SynthConfig {
            documents: 200,
            sentences_per_document: 6,
            ..Default::default()
        },
        1,
    );
    let mut annotations = std::collections::BTreeMap::new();
    for (name, corpus) in [("ann1", &a), ("ann2", &b_corpus)] {
        let docs: std::collections::BTreeMap<String, Vec<ner_lab_core::Mention>> = corpus
            .documents
            .iter()
            .map(|d| (d.id.clone(), d.mentions.clone()))
            .collect();
        annotations.insert(name.to_string(), docs);
    }
    let cfg = evaluate::AgreementConfig::default();

    let mut group = c.benchmark_group("agreement_average");
    group.bench_function("sequential", |b| {
        par::force_sequential(true);
        b.iter(|| evaluate::agreement_average(black_box(&annotations), cfg).unwrap());
    });
    group.bench_function("parallel", |b| {
        par::force_sequential(false);
        b.iter(|| evaluate::agreement_average(black_box(&annotations), cfg).unwrap());
    });
    group.finish();
    par::force_sequential(false);
}

criterion_group!(benches, bench_corpus_stats, bench_tagging, bench_agreement);
criterion_main!(benches);
